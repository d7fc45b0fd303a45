from .constants import PhysicalConstants
from .radial_grid import (
    RadialGrid,
    RadialFunction,
    RadialWeight,
    integrate_radial,
    cumulative_radial,
    differentiate,
)

__all__ = [
    "PhysicalConstants",
    "RadialGrid",
    "RadialFunction",
    "RadialWeight",
    "integrate_radial",
    "cumulative_radial",
    "differentiate",
]
