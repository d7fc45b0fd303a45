"""
Numerov sweeps for the s-wave radial equation in the v = r*psi form.

With v = r*psi the radial equation loses its first-derivative term and reads
v'' = (2m/hbar^2)(u - eps) v, which is what the three-point Numerov recursion
integrates. The kernels below are compiled with numba and work on plain
arrays; the public wrappers take RadialFunction inputs.
"""
import logging
from enum import Enum
from typing import Tuple, Union

import numpy as np

from ..exceptions import SCFEnergyError, SCFInputError
from ..grid import RadialFunction
from ..utils.numba_utils import njit

logger = logging.getLogger("scfhydrogen")

RESCALE_LIMIT = 1e100


class SweepDirection(str, Enum):
    OUTWARD = "outward"
    INWARD = "inward"


@njit
def _sweep_outward(f, v0, v1, stop):
    n = f.shape[0]
    v = np.zeros(n)
    v[0] = v0
    v[1] = v1
    nodes = 0
    last = v1 if v1 != 0.0 else v0
    if v0 != 0.0 and v1 != 0.0 and (v0 > 0.0) != (v1 > 0.0):
        nodes += 1
    for i in range(1, stop):
        v[i + 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i - 1] * v[i - 1]) / f[i + 1]
        if v[i + 1] != 0.0:
            if last != 0.0 and (v[i + 1] > 0.0) != (last > 0.0):
                nodes += 1
            last = v[i + 1]
        if abs(v[i + 1]) > RESCALE_LIMIT:
            scale = 1.0 / abs(v[i + 1])
            for j in range(i + 2):
                v[j] *= scale
            last = v[i + 1]
    return v, nodes


@njit
def _sweep_inward(f, v_last, v_penultimate, stop):
    n = f.shape[0]
    v = np.zeros(n)
    v[n - 1] = v_last
    v[n - 2] = v_penultimate
    for i in range(n - 2, stop, -1):
        v[i - 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i + 1] * v[i + 1]) / f[i - 1]
        if abs(v[i - 1]) > RESCALE_LIMIT:
            scale = 1.0 / abs(v[i - 1])
            for j in range(i - 1, n):
                v[j] *= scale
    return v


@njit
def _sign_changes(values):
    nodes = 0
    last = 0.0
    for x in values:
        if x != 0.0:
            if last != 0.0 and (x > 0.0) != (last > 0.0):
                nodes += 1
            last = x
    return nodes


def numerov_factors(u: np.ndarray, spacing: float, mass: float, energy: float, hbar: float = 1.0) -> np.ndarray:
    """
    Numerov weights f_i = 1 - h^2 q_i / 12 with q = 2m(u - eps)/hbar^2.

    Raises:
        SCFInputError: If some f_i <= 0, i.e. the grid cannot resolve the
            local wavelength or decay length at this energy
    """
    q = (2.0 * mass / hbar**2) * (u - energy)
    f = 1.0 - (spacing * spacing / 12.0) * q
    if np.any(f <= 0.0):
        worst = float(np.min(f))
        logger.error(f"Numerov weight {worst:.3g} <= 0 at energy {energy:.6g}, mass {mass:.6g}")
        raise SCFInputError(
            f"grid spacing {spacing} too coarse for mass {mass} at energy {energy} (Numerov weight {worst:.3g})"
        )
    return f


def outward_seeds(u: np.ndarray, r: np.ndarray, mass: float, energy: float, hbar: float = 1.0) -> Tuple[float, float]:
    """
    Regular-solution seeds v(r1), v(r2) from the series v = r + a1 r^2 + a2 r^3.

    Near the origin u is modelled as c/r + d, with c and d fitted to the first
    two samples, so a Coulomb singularity and a finite potential are both
    covered.
    """
    r1, r2 = r[0], r[1]
    d = (r2 * u[1] - r1 * u[0]) / (r2 - r1)
    c = r1 * u[0] - d * r1
    k = mass / hbar**2
    a1 = k * c
    a2 = (k * k * c * c + k * (d - energy)) / 3.0
    return (
        float(r1 * (1.0 + a1 * r1 + a2 * r1 * r1)),
        float(r2 * (1.0 + a1 * r2 + a2 * r2 * r2)),
    )


def inward_seeds(spacing: float, mass: float, energy: float, tail_limit: float, hbar: float = 1.0) -> Tuple[float, float]:
    """
    Decaying seeds e^{-kappa (r - r_{n-1})} at the last two grid points.

    The common factor e^{-kappa r_max} is dropped since the sweep is defined up
    to scale; this keeps heavy-particle tails representable.

    Raises:
        SCFEnergyError: If energy >= tail_limit
    """
    if not energy < tail_limit:
        raise SCFEnergyError(f"energy {energy} is not below the potential tail {tail_limit}; no decaying solution")
    kappa = np.sqrt(2.0 * mass * (tail_limit - energy)) / hbar
    return 1.0, float(np.exp(kappa * spacing))


def sweep(
    f: np.ndarray,
    seeds: Tuple[float, float],
    direction: SweepDirection,
    stop: int,
) -> Tuple[np.ndarray, int]:
    """
    Run one compiled sweep ending at index stop.

    Returns:
        (v, nodes) where v is zero outside the swept segment; nodes is only
        counted for outward sweeps and is 0 otherwise
    """
    if direction is SweepDirection.OUTWARD:
        v, nodes = _sweep_outward(f, seeds[0], seeds[1], stop)
        return v, int(nodes)
    return _sweep_inward(f, seeds[0], seeds[1], stop), 0


def integrate_numerov(
    potential,
    mass: float,
    energy: float,
    direction: Union[SweepDirection, str],
    match_index: int,
    hbar: float = 1.0,
) -> RadialFunction:
    """
    Integrate v'' = (2m/hbar^2)(u - eps) v from one boundary to match_index.

    Args:
        potential: EffectivePotential supplying u and its tail limit
        mass: Particle mass in electron masses
        energy: Trial energy in Hartree
        direction: "outward" from the origin or "inward" from r_max
        match_index: Last index of the swept segment, 2 <= match_index <= n-3

    Returns:
        v = r*psi on the swept segment, zero elsewhere, defined up to scale

    Raises:
        SCFInputError: If match_index is not strictly inside the grid or the
            grid is too coarse
        SCFEnergyError: If energy >= tail limit on an inward sweep
    """
    direction = SweepDirection(direction)
    grid = potential.u.grid
    n = grid.n_points
    if not 2 <= match_index <= n - 3:
        raise SCFInputError(f"match_index {match_index} must lie in [2, {n - 3}]")
    u = potential.u.values
    if direction is SweepDirection.INWARD:
        seeds = inward_seeds(grid.spacing, mass, energy, potential.tail_limit, hbar)
    else:
        seeds = outward_seeds(u, grid.r_values, mass, energy, hbar)
    f = numerov_factors(u, grid.spacing, mass, energy, hbar)
    v, _ = sweep(f, seeds, direction, match_index)
    return RadialFunction(grid, v)


def count_nodes(v: RadialFunction) -> int:
    """
    Number of strict sign changes of an outward-swept v.

    Exact zeros are skipped, so the zero padding beyond the swept segment does
    not count.

    Raises:
        SCFInputError: If v vanishes identically
    """
    if not np.any(v.values != 0.0):
        raise SCFInputError("cannot count nodes of an identically zero function")
    return int(_sign_changes(v.values))
