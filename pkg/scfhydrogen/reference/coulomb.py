"""
Analytic Coulomb hydrogen: spectrum, 1s shapes and screened potentials.

Serves as the oracle for the eigensolver and as the baseline the
self-consistent model is compared against.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..exceptions import SCFInputError
from ..grid import RadialFunction, RadialGrid, RadialWeight, integrate_radial
from ..grid.constants import PhysicalConstants
from ..radial.bound_state import BoundState

logger = logging.getLogger("scfhydrogen")


def reduced_mass(m_p: float, m_e: float) -> float:
    """
    m_e m_p / (m_e + m_p).

    Raises:
        SCFInputError: If either mass is not positive
    """
    if not (m_p > 0 and m_e > 0):
        raise SCFInputError(f"masses must be positive, got m_p={m_p} m_e={m_e}")
    return m_e * m_p / (m_e + m_p)


@dataclass(frozen=True)
class CoulombLevel:
    """Level n of the Coulomb problem, energy -m/(2n^2) in Hartree."""

    n: int
    energy: float
    reduced_mass: float

    @classmethod
    def of(cls, n: int, mass: float) -> "CoulombLevel":
        if n < 1:
            raise SCFInputError(f"principal quantum number must be >= 1, got {n}")
        return cls(n=n, energy=-mass / (2.0 * n * n), reduced_mass=mass)


def coulomb_levels(mass: float, n_max: int) -> List[CoulombLevel]:
    """
    Levels n = 1..n_max for the given reduced mass.

    Raises:
        SCFInputError: If n_max < 1
    """
    if n_max < 1:
        raise SCFInputError(f"n_max must be at least 1, got {n_max}")
    return [CoulombLevel.of(n, mass) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    coulomb_energy: float
    delta_total: float
    delta_total_rel: float
    delta_electron: float
    delta_electron_rel: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "coulomb_energy": self.coulomb_energy,
            "delta_total": self.delta_total,
            "delta_total_rel": self.delta_total_rel,
            "delta_electron": self.delta_electron,
            "delta_electron_rel": self.delta_electron_rel,
        }


@dataclass(frozen=True)
class ComparisonReport:
    """
    Levels of the self-consistent model tabulated against the Coulomb spectrum.

    Each row compares E_total and E_e with level n; moments of the electron
    state are compared with the Coulomb 1s values 1.5/m and 3/m^2.
    """

    reduced_mass: float
    E_p: float
    E_e: float
    E_total: float
    rows: List[ComparisonRow] = field(default_factory=list)
    mean_r: Optional[float] = None
    mean_r2: Optional[float] = None
    levels_non_positive: bool = True

    @property
    def mean_r_coulomb(self) -> float:
        return 1.5 / self.reduced_mass

    @property
    def mean_r2_coulomb(self) -> float:
        return 3.0 / self.reduced_mass**2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reduced_mass": self.reduced_mass,
            "E_p": self.E_p,
            "E_e": self.E_e,
            "E_total": self.E_total,
            "levels_non_positive": self.levels_non_positive,
            "moments": {
                "mean_r": self.mean_r,
                "mean_r_coulomb": self.mean_r_coulomb,
                "mean_r2": self.mean_r2,
                "mean_r2_coulomb": self.mean_r2_coulomb,
            },
            "rows": [row.to_dict() for row in self.rows],
        }


def _relative(delta: float, reference: float) -> float:
    return delta / abs(reference)


def compare_levels(
    E_p: float,
    E_e: float,
    mass: float,
    n_max: int,
    mean_r: Optional[float] = None,
    mean_r2: Optional[float] = None,
) -> ComparisonReport:
    """
    Build the comparison table from bare level values.

    Raises:
        SCFInputError: If n_max < 1 or a level is not finite
    """
    if not (np.isfinite(E_p) and np.isfinite(E_e)):
        raise SCFInputError(f"levels must be finite, got E_p={E_p} E_e={E_e}")
    E_total = E_p + E_e
    rows = []
    for level in coulomb_levels(mass, n_max):
        rows.append(
            ComparisonRow(
                n=level.n,
                coulomb_energy=level.energy,
                delta_total=E_total - level.energy,
                delta_total_rel=_relative(E_total - level.energy, level.energy),
                delta_electron=E_e - level.energy,
                delta_electron_rel=_relative(E_e - level.energy, level.energy),
            )
        )
    non_positive = E_p <= 0.0 and E_e <= 0.0
    if not non_positive:
        logger.warning(f"Finding: positive level in the self-consistent model (E_p={E_p:.10g}, E_e={E_e:.10g})")
    return ComparisonReport(
        reduced_mass=mass,
        E_p=E_p,
        E_e=E_e,
        E_total=E_total,
        rows=rows,
        mean_r=mean_r,
        mean_r2=mean_r2,
        levels_non_positive=non_positive,
    )


def compare_models(solution, n_max: int, constants: Optional[PhysicalConstants] = None) -> ComparisonReport:
    """
    Compare a converged self-consistent solution with Coulomb hydrogen.

    Args:
        solution: Converged EigenstateSolution
        n_max: Number of Coulomb levels to tabulate
        constants: Masses used for the reduced mass (defaults to the physical ones)

    Returns:
        ComparisonReport with n_max rows

    Raises:
        SCFInputError: If the solution is not converged or n_max < 1
    """
    if not solution.converged:
        raise SCFInputError("compare_models needs a converged solution")
    if n_max < 1:
        raise SCFInputError(f"n_max must be at least 1, got {n_max}")
    constants = constants or PhysicalConstants()
    mass = reduced_mass(constants.mass_p, constants.mass_e)
    return compare_levels(
        solution.E_p,
        solution.E_e,
        mass,
        n_max,
        mean_r=solution.psi_e.moment(1),
        mean_r2=solution.psi_e.moment(2),
    )


def hydrogen_1s_state(
    grid: RadialGrid,
    radius: float = 1.0,
    mass: float = 1.0,
    energy: Optional[float] = None,
    hbar: float = 1.0,
) -> BoundState:
    """
    Nodeless state psi ~ exp(-r/radius), normalized on the grid.

    The energy defaults to the Coulomb value -hbar^2/(2 m radius^2) of a 1s
    state with that radius.
    """
    if not radius > 0:
        raise SCFInputError(f"radius must be positive, got {radius}")
    shape = RadialFunction.from_callable(grid, lambda r: np.exp(-r / radius))
    norm = integrate_radial(RadialFunction(grid, shape.values**2), RadialWeight.FOUR_PI_R2)
    psi = RadialFunction(grid, shape.values / np.sqrt(norm))
    if energy is None:
        energy = -(hbar**2) / (2.0 * mass * radius**2)
    return BoundState(energy=float(energy), psi=psi, nodes=0, mass=mass)


def hydrogen_2s_shape(grid: RadialGrid, radius: float = 1.0) -> RadialFunction:
    """Unnormalized v = r (1 - r/(2 radius)) exp(-r/(2 radius))."""
    return RadialFunction.from_callable(grid, lambda r: r * (1.0 - r / (2.0 * radius)) * np.exp(-r / (2.0 * radius)))


def screened_1s_potential(grid: RadialGrid, radius: float = 1.0, charge: float = 1.0) -> RadialFunction:
    """
    Potential of a total charge spread as a 1s cloud exp(-2r/radius).

    charge * [1/r - exp(-2r/radius)(1/r + 1/radius)]
    """
    return RadialFunction.from_callable(
        grid,
        lambda r: charge * (1.0 / r - np.exp(-2.0 * r / radius) * (1.0 / r + 1.0 / radius)),
    )


def uniform_ball_potential(grid: RadialGrid, radius: float, charge: float) -> RadialFunction:
    """Potential of a uniformly charged ball: q/r outside, q(3R^2 - r^2)/(2R^3) inside."""
    if not radius > 0:
        raise SCFInputError(f"radius must be positive, got {radius}")

    def potential(r: np.ndarray) -> np.ndarray:
        inside = charge * (3.0 * radius**2 - r**2) / (2.0 * radius**3)
        return np.where(r < radius, inside, charge / r)

    return RadialFunction.from_callable(grid, potential)
