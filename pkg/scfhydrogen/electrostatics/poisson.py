"""
Electrostatic potential of spherically symmetric charge densities.

Sign convention: phi'' + (2/r) phi' = -4 pi rho, so a positive charge gives a
positive potential. The potential is built from the enclosed charge Q(r) by two
running integrals and vanishes at infinity; beyond r_max the density is taken
to be zero and the tail is the Coulomb field of Q(r_max).
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import SCFInputError
from ..grid import RadialFunction, RadialWeight, cumulative_radial, differentiate, integrate_radial

logger = logging.getLogger("scfhydrogen")

NORMALIZATION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ChargeDensity:
    """Charge per unit volume in atomic units."""

    rho: RadialFunction

    @property
    def grid(self):
        return self.rho.grid

    def total_charge(self) -> float:
        return integrate_radial(self.rho, RadialWeight.FOUR_PI_R2)

    def enclosed_charge(self) -> np.ndarray:
        return cumulative_radial(self.rho, RadialWeight.FOUR_PI_R2)

    def __add__(self, other: "ChargeDensity") -> "ChargeDensity":
        return ChargeDensity(self.rho + other.rho)


def particle_density(state, charge: float) -> ChargeDensity:
    """
    Charge density charge * |psi|^2 of one normalized particle.

    Raises:
        SCFInputError: If the state is not normalized
    """
    norm = state.normalization()
    if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
        logger.error(f"State with energy {state.energy} has norm {norm}")
        raise SCFInputError(f"state is not normalized: 4*pi*integral |psi|^2 r^2 dr = {norm:.12g}")
    return ChargeDensity(RadialFunction(state.grid, charge * state.psi.values**2))


def charge_density(psi_p, psi_e, charge_e: float = 1.0) -> ChargeDensity:
    """
    rho = e|psi_p|^2 - e|psi_e|^2 of a normalized proton and electron.

    Args:
        psi_p: Proton BoundState
        psi_e: Electron BoundState
        charge_e: Elementary charge

    Returns:
        Neutral ChargeDensity

    Raises:
        SCFInputError: On a grid mismatch or an unnormalized state
    """
    psi_p.psi.check_same_grid(psi_e.psi)
    return particle_density(psi_p, charge_e) + particle_density(psi_e, -charge_e)


def solve_potential(rho: ChargeDensity) -> RadialFunction:
    """
    phi(r) = integral_r^inf Q(r')/r'^2 dr' with Q the charge enclosed within r'.

    Computed as phi_i = G(r_max) - G(r_i) + Q(r_max)/r_max where G is the running
    integral of Q/r^2; the last term is the analytic tail beyond r_max.

    Args:
        rho: Charge density, neutral or not

    Returns:
        Potential on the density's grid, vanishing at infinity
    """
    grid = rho.grid
    r = grid.r_values
    enclosed = rho.enclosed_charge()
    field_integral = cumulative_radial(RadialFunction(grid, enclosed / (r * r)))
    phi = field_integral[-1] - field_integral + enclosed[-1] / grid.r_max
    return RadialFunction(grid, phi)


def poisson_residual(phi: RadialFunction, rho: ChargeDensity) -> float:
    """
    Max-norm residual of phi'' + (2/r) phi' + 4 pi rho over interior points.

    Evaluated on y = r*phi, for which the equation reads y'' = -4 pi r rho,
    with the compact fourth-order stencil
    [(y+ - 2y + y-)/h^2 - (s+ + 10 s + s-)/12] / r.
    """
    phi.check_same_grid(rho.rho)
    grid = phi.grid
    h = grid.spacing
    r = grid.r_values
    y = r * phi.values
    s = -4.0 * np.pi * r * rho.rho.values
    second = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / (h * h)
    source = (s[2:] + 10.0 * s[1:-1] + s[:-2]) / 12.0
    residual = (second - source) / r[1:-1]
    if residual.size == 0:
        return 0.0
    return float(np.max(np.abs(residual)))


def electric_field(phi: RadialFunction) -> RadialFunction:
    """E = -dphi/dr."""
    return -differentiate(phi)


def gauge_constant(phi: RadialFunction) -> float:
    """
    Estimate lim phi(r) as r -> infinity from the Coulomb tail phi ~ C + Q/r.

    At r_max, C = phi + r phi'. Zero for potentials from solve_potential up to
    the one-sided difference error.
    """
    slope = differentiate(phi).values[-1]
    return float(phi.values[-1] + phi.grid.r_max * slope)
