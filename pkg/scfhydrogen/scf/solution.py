"""
Result types of the self-consistent field iteration.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..electrostatics.poisson import ChargeDensity
from ..grid import RadialFunction
from ..radial.bound_state import BoundState


@dataclass(frozen=True)
class ResidualRecord:
    """Diagnostics of one SCF iteration; the energy changes are NaN on the first one."""

    iteration: int
    phi_residual: float
    delta_e_p: float
    delta_e_e: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "phi_residual": self.phi_residual,
            "delta_e_p": None if math.isnan(self.delta_e_p) else self.delta_e_p,
            "delta_e_e": None if math.isnan(self.delta_e_e) else self.delta_e_e,
        }


@dataclass(frozen=True)
class PartialPotentials:
    """
    Potentials generated separately by the proton and the electron density.

    Iterated instead of the total potential when self-interaction is off.
    """

    phi_p: RadialFunction
    phi_e: RadialFunction

    def __post_init__(self) -> None:
        self.phi_p.check_same_grid(self.phi_e)

    @property
    def grid(self):
        return self.phi_p.grid

    @property
    def total(self) -> RadialFunction:
        return self.phi_p + self.phi_e

    def as_vector(self) -> np.ndarray:
        return np.concatenate((self.phi_p.values, self.phi_e.values))

    @classmethod
    def from_vector(cls, grid, vector: np.ndarray) -> "PartialPotentials":
        n = grid.n_points
        return cls(RadialFunction(grid, vector[:n]), RadialFunction(grid, vector[n:]))

    def shifted(self, constant: float) -> "PartialPotentials":
        return PartialPotentials(self.phi_p + constant, self.phi_e + constant)


@dataclass(frozen=True)
class EigenstateSolution:
    """
    Proton and electron states with the potential they are consistent with.

    E_total is the sum of the two levels by construction.
    """

    psi_p: BoundState
    psi_e: BoundState
    phi: RadialFunction
    rho: ChargeDensity
    e_field: RadialFunction
    converged: bool
    iterations: int
    residual_history: Tuple[ResidualRecord, ...] = ()
    potentials: Optional[PartialPotentials] = field(default=None, repr=False)
    gauge: float = 0.0

    @property
    def E_p(self) -> float:
        return self.psi_p.energy

    @property
    def E_e(self) -> float:
        return self.psi_e.energy

    @property
    def E_total(self) -> float:
        return self.E_p + self.E_e

    @property
    def grid(self):
        return self.phi.grid
