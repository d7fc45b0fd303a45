from .numerov import SweepDirection, integrate_numerov, count_nodes
from .bound_state import (
    BoundState,
    EffectivePotential,
    find_bound_state,
    wronskian,
    eigen_residual,
    probability_current,
)

__all__ = [
    "SweepDirection",
    "integrate_numerov",
    "count_nodes",
    "BoundState",
    "EffectivePotential",
    "find_bound_state",
    "wronskian",
    "eigen_residual",
    "probability_current",
]
