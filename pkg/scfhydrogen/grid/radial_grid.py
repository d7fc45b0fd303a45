"""
Radial discretization and quadrature shared by every solver module.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Union

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from ..exceptions import SCFInputError

logger = logging.getLogger("scfhydrogen")


class RadialWeight(str, Enum):
    """Measure used by integrate_radial."""

    PLAIN = "plain"
    R2 = "r2"
    FOUR_PI_R2 = "4pi_r2"


@dataclass(frozen=True)
class RadialGrid:
    """
    Uniform grid r_i = i*h, i = 1..n_points, on the half-line 0 < r <= r_max.

    The origin is excluded; quantities that need a value at r = 0 get it by
    extrapolation (integrands carrying r^2 vanish there exactly).
    """

    n_points: int
    spacing: float
    r_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise SCFInputError(f"n_points must be an integer >= 2, got {self.n_points}")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise SCFInputError(f"grid spacing must be positive, got {self.spacing}")
        r_values = self.spacing * np.arange(1, int(self.n_points) + 1, dtype=float)
        r_values.flags.writeable = False
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "r_values", r_values)

    @classmethod
    def from_extent(cls, spacing: float, r_max: float) -> "RadialGrid":
        """
        Build the grid with the given spacing whose last point is closest to r_max.

        Args:
            spacing: Grid spacing h in Bohr
            r_max: Outer radius in Bohr

        Returns:
            RadialGrid covering (0, r_max]
        """
        if not (spacing > 0 and r_max > 0):
            raise SCFInputError(f"spacing and r_max must be positive, got h={spacing} r_max={r_max}")
        return cls(n_points=int(round(r_max / spacing)), spacing=float(spacing))

    @property
    def r_max(self) -> float:
        return float(self.r_values[-1])

    def __len__(self) -> int:
        return self.n_points


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """Real samples of a function of r aligned with a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise SCFInputError(
                f"values of shape {values.shape} do not match a grid of {self.grid.n_points} points"
            )
        if not np.all(np.isfinite(values)):
            raise SCFInputError("radial function has non-finite samples")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, grid: RadialGrid, func: Callable[[np.ndarray], np.ndarray]) -> "RadialFunction":
        return cls(grid, func(grid.r_values))

    @classmethod
    def zeros(cls, grid: RadialGrid) -> "RadialFunction":
        return cls(grid, np.zeros(grid.n_points))

    def check_same_grid(self, other: "RadialFunction") -> None:
        if self.grid != other.grid:
            raise SCFInputError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: Union["RadialFunction", float]) -> "RadialFunction":
        if isinstance(other, RadialFunction):
            self.check_same_grid(other)
            return RadialFunction(self.grid, self.values + other.values)
        return RadialFunction(self.grid, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other: Union["RadialFunction", float]) -> "RadialFunction":
        return self + (-other)

    def __neg__(self) -> "RadialFunction":
        return RadialFunction(self.grid, -self.values)

    def __mul__(self, scalar: float) -> "RadialFunction":
        return RadialFunction(self.grid, float(scalar) * self.values)

    __rmul__ = __mul__


def _weight_factor(r: np.ndarray, weight: RadialWeight) -> np.ndarray:
    if weight is RadialWeight.PLAIN:
        return np.ones_like(r)
    if weight is RadialWeight.R2:
        return r * r
    return 4.0 * np.pi * r * r


def _extrapolate_to_origin(values: np.ndarray) -> float:
    # cubic Lagrange extrapolation from r = h..4h, exact for cubics
    if values.size >= 4:
        return float(4.0 * values[0] - 6.0 * values[1] + 4.0 * values[2] - values[3])
    return float(2.0 * values[0] - values[1])


def _integrand_with_origin(f: RadialFunction, weight: RadialWeight) -> np.ndarray:
    values = f.values
    if not np.all(np.isfinite(values)):
        raise SCFInputError("cannot integrate a function with non-finite samples")
    weighted = values * _weight_factor(f.grid.r_values, weight)
    origin = _extrapolate_to_origin(values) if weight is RadialWeight.PLAIN else 0.0
    return np.concatenate(([origin], weighted))


def integrate_radial(f: RadialFunction, weight: Union[RadialWeight, str] = RadialWeight.PLAIN) -> float:
    """
    Integrate a radial function over [0, r_max] with composite Simpson quadrature.

    The sliver [0, r_1] is closed with the integrand's value at the origin: zero
    for the r^2 measures, the extrapolated sample for the plain measure.

    Args:
        f: Sampled function
        weight: "plain", "r2" or "4pi_r2"

    Returns:
        Value of the integral

    Raises:
        SCFInputError: If the samples are not finite
    """
    weight = RadialWeight(weight)
    samples = _integrand_with_origin(f, weight)
    return float(simpson(samples, dx=f.grid.spacing))


def cumulative_radial(f: RadialFunction, weight: Union[RadialWeight, str] = RadialWeight.PLAIN) -> np.ndarray:
    """
    Running integral from 0 to each r_i with the same closure as integrate_radial.

    Uses the antiderivative of the not-a-knot cubic spline through the samples,
    exact for cubics with an error that varies smoothly from point to point.

    Args:
        f: Sampled function
        weight: "plain", "r2" or "4pi_r2"

    Returns:
        Array aligned with the grid's r_values
    """
    weight = RadialWeight(weight)
    samples = _integrand_with_origin(f, weight)
    nodes = np.concatenate(([0.0], f.grid.r_values))
    running = CubicSpline(nodes, samples).antiderivative()
    return running(f.grid.r_values)


def differentiate(f: RadialFunction) -> RadialFunction:
    """
    First derivative by central differences, second-order one-sided at the ends.

    Used for diagnostics (electric field, gauge tail), never inside the eigensolver.

    Args:
        f: Sampled function

    Returns:
        Derivative sampled on the same grid

    Raises:
        SCFInputError: If the grid has fewer than 5 points
    """
    if f.grid.n_points < 5:
        raise SCFInputError(f"differentiate needs at least 5 grid points, got {f.grid.n_points}")
    return RadialFunction(f.grid, np.gradient(f.values, f.grid.spacing, edge_order=2))
