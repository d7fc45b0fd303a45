"""
Node-indexed bound states of the s-wave radial equation by shooting.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..exceptions import SCFConvergenceError, SCFInputError, SCFNoBoundStateError
from ..grid import RadialFunction, RadialWeight, differentiate, integrate_radial
from .numerov import (
    SweepDirection,
    inward_seeds,
    numerov_factors,
    outward_seeds,
    sweep,
)

logger = logging.getLogger("scfhydrogen")

DEFAULT_CEILING_OFFSET = 1e-6
NODE_BRACKET_RTOL = 1e-3
NODE_BRACKET_ATOL = 1e-10
ENERGY_XTOL = 1e-12
MAX_EXPANSIONS = 8


@dataclass(frozen=True)
class EffectivePotential:
    """
    Potential energy u(r) felt by one particle, in Hartree.

    tail_limit is the value u approaches as r grows; bound states lie below it.
    """

    u: RadialFunction
    tail_limit: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.tail_limit):
            raise SCFInputError(f"tail_limit must be finite, got {self.tail_limit}")

    @property
    def grid(self):
        return self.u.grid

    def shifted(self, constant: float) -> "EffectivePotential":
        return EffectivePotential(self.u + constant, self.tail_limit + constant)


@dataclass(frozen=True)
class BoundState:
    """One eigenpair (energy, psi) of the radial equation; psi is real."""

    energy: float
    psi: RadialFunction
    nodes: int
    mass: float

    @property
    def grid(self):
        return self.psi.grid

    @property
    def v(self) -> RadialFunction:
        return RadialFunction(self.grid, self.psi.values * self.grid.r_values)

    def normalization(self) -> float:
        """4*pi * integral of |psi|^2 r^2 dr."""
        return integrate_radial(RadialFunction(self.grid, self.psi.values**2), RadialWeight.FOUR_PI_R2)

    def moment(self, power: int) -> float:
        """Expectation value <r^power>."""
        density = RadialFunction(self.grid, self.psi.values**2 * self.grid.r_values**power)
        return integrate_radial(density, RadialWeight.FOUR_PI_R2) / self.normalization()


class _Shooter:
    """Sweeps for one potential and mass, counting every evaluation against a cap."""

    def __init__(self, potential: EffectivePotential, mass: float, hbar: float, max_iter: int):
        self.potential = potential
        self.mass = mass
        self.hbar = hbar
        self.max_iter = max_iter
        self.evaluations = 0
        self.grid = potential.grid
        self.u = potential.u.values

    def _tick(self, bracket: Tuple[float, float]) -> None:
        self.evaluations += 1
        if self.evaluations > self.max_iter:
            logger.error(f"Eigensolver exceeded {self.max_iter} evaluations, bracket {bracket}")
            raise SCFConvergenceError(
                f"eigensolver exceeded {self.max_iter} iterations", bracket=bracket
            )

    def factors(self, energy: float) -> np.ndarray:
        return numerov_factors(self.u, self.grid.spacing, self.mass, energy, self.hbar)

    def outward(self, energy: float, stop: int) -> Tuple[np.ndarray, int]:
        seeds = outward_seeds(self.u, self.grid.r_values, self.mass, energy, self.hbar)
        return sweep(self.factors(energy), seeds, SweepDirection.OUTWARD, stop)

    def inward(self, energy: float, stop: int) -> np.ndarray:
        seeds = inward_seeds(self.grid.spacing, self.mass, energy, self.potential.tail_limit, self.hbar)
        v, _ = sweep(self.factors(energy), seeds, SweepDirection.INWARD, stop)
        return v

    def node_count(self, energy: float, bracket: Tuple[float, float]) -> int:
        self._tick(bracket)
        _, nodes = self.outward(energy, self.grid.n_points - 1)
        return nodes

    def match_index(self, energy: float) -> int:
        n = self.grid.n_points
        allowed = np.nonzero(self.u < energy)[0]
        index = int(allowed[-1]) if allowed.size else n // 2
        return min(max(index, 2), n - 3)

    def mismatch(self, energy: float, match: int, bracket: Tuple[float, float]) -> float:
        """Log-derivative mismatch v'_out/v_out - v'_in/v_in at the matching point."""
        self._tick(bracket)
        h = self.grid.spacing
        v_out, _ = self.outward(energy, match + 1)
        v_in = self.inward(energy, match - 1)
        d_out = (v_out[match + 1] - v_out[match - 1]) / (2.0 * h * v_out[match])
        d_in = (v_in[match + 1] - v_in[match - 1]) / (2.0 * h * v_in[match])
        return float(d_out - d_in)


def default_bracket(potential: EffectivePotential) -> Tuple[float, float]:
    """(min u, tail - 1e-6): every bound level of u lies in this window."""
    return float(np.min(potential.u.values)), potential.tail_limit - DEFAULT_CEILING_OFFSET


def find_bound_state(
    potential: EffectivePotential,
    mass: float,
    node_target: int,
    bracket: Optional[Tuple[float, float]] = None,
    hbar: float = 1.0,
    max_iter: int = 200,
) -> BoundState:
    """
    Find the bound state with node_target interior nodes by shooting.

    The level is first isolated by bisection on the node count of the
    full-grid outward sweep, then the log-derivative mismatch at the outer
    turning point is driven to zero with Brent's method.

    Args:
        potential: Potential energy and tail limit
        mass: Particle mass in electron masses
        node_target: Number of interior nodes of r*psi
        bracket: (eps_lo, eps_hi) with eps_lo < eps_hi <= tail limit; defaults
            to (min u, tail - 1e-6)
        hbar: Reduced Planck constant
        max_iter: Cap on sweep evaluations

    Returns:
        Normalized real BoundState with psi positive near the origin

    Raises:
        SCFInputError: For a malformed bracket or a grid too coarse for the mass
        SCFNoBoundStateError: If no level with node_target nodes lies in the bracket
        SCFConvergenceError: If the evaluation cap is exceeded
    """
    if node_target < 0:
        raise SCFInputError(f"node_target must be non-negative, got {node_target}")
    if bracket is None:
        lo, hi = default_bracket(potential)
        if not lo < hi:
            raise SCFNoBoundStateError(
                f"potential has no well below its tail {potential.tail_limit:.6g} (min u = {lo:.6g})"
            )
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        if not (lo < hi <= potential.tail_limit):
            raise SCFInputError(
                f"bracket ({lo}, {hi}) must satisfy lo < hi <= tail limit {potential.tail_limit}"
            )

    shooter = _Shooter(potential, mass, hbar, max_iter)
    n_lo = shooter.node_count(lo, (lo, hi))
    n_hi = shooter.node_count(hi, (lo, hi))
    logger.debug(f"Node counts {n_lo}..{n_hi} on [{lo:.8g}, {hi:.8g}], target {node_target}")
    if not n_lo <= node_target < n_hi:
        raise SCFNoBoundStateError(
            f"no level with {node_target} nodes in [{lo:.8g}, {hi:.8g}] (node counts {n_lo}..{n_hi})"
        )

    a, b = lo, hi
    while b - a > NODE_BRACKET_RTOL * max(abs(a), abs(b)) + NODE_BRACKET_ATOL:
        mid = 0.5 * (a + b)
        if shooter.node_count(mid, (a, b)) <= node_target:
            a = mid
        else:
            b = mid
    logger.debug(f"Level with {node_target} nodes isolated in [{a:.10g}, {b:.10g}]")

    match = shooter.match_index(0.5 * (a + b))
    d_a = shooter.mismatch(a, match, (a, b))
    d_b = shooter.mismatch(b, match, (a, b))
    step = b - a
    expansions = 0
    # the confined (Dirichlet) level sits above the matched one, so widen downward
    while d_a * d_b > 0.0 and expansions < MAX_EXPANSIONS:
        candidate = max(a - step, lo)
        if candidate == a or shooter.node_count(candidate, (a, b)) > node_target:
            break
        a = candidate
        d_a = shooter.mismatch(a, match, (a, b))
        step *= 2.0
        expansions += 1
    if d_a * d_b > 0.0:
        raise SCFNoBoundStateError(
            f"log-derivative mismatch keeps its sign on [{a:.10g}, {b:.10g}] for the level with {node_target} nodes"
        )

    remaining = max(max_iter - shooter.evaluations, 1)
    try:
        energy = brentq(
            lambda e: shooter.mismatch(e, match, (a, b)),
            a,
            b,
            xtol=ENERGY_XTOL,
            maxiter=remaining,
        )
    except RuntimeError as e:
        raise SCFConvergenceError(f"root polishing did not converge: {e}", bracket=(a, b)) from e

    state = _assemble(shooter, float(energy), match, node_target)
    logger.debug(
        f"Bound state nodes={node_target} mass={mass:.6g} energy={state.energy:.12g} "
        f"({shooter.evaluations} sweeps, match r={potential.grid.r_values[match]:.4g})"
    )
    return state


def _assemble(shooter: _Shooter, energy: float, match: int, node_target: int) -> BoundState:
    grid = shooter.grid
    v_out, _ = shooter.outward(energy, match)
    v_in = shooter.inward(energy, match)
    v = np.concatenate((v_out[: match + 1], v_in[match + 1 :] * (v_out[match] / v_in[match])))
    psi = v / grid.r_values
    if psi[0] < 0.0:
        psi = -psi
    norm = integrate_radial(RadialFunction(grid, psi**2), RadialWeight.FOUR_PI_R2)
    if not (np.isfinite(norm) and norm > 0.0):
        raise SCFConvergenceError(f"assembled state at energy {energy} is not normalizable", bracket=(energy, energy))
    psi = psi / np.sqrt(norm)

    nodes = int(np.count_nonzero(np.diff(np.sign(v[v != 0.0]))))
    if nodes != node_target:
        raise SCFConvergenceError(
            f"state at energy {energy} has {nodes} nodes instead of {node_target}", bracket=(energy, energy)
        )
    state_psi = RadialFunction(grid, psi)
    kinetic = integrate_radial(RadialFunction(grid, differentiate(state_psi).values ** 2), RadialWeight.FOUR_PI_R2)
    if not np.isfinite(kinetic):
        raise SCFConvergenceError(f"state at energy {energy} has a divergent gradient integral", bracket=(energy, energy))
    return BoundState(energy=energy, psi=state_psi, nodes=nodes, mass=shooter.mass)


def wronskian(v1: RadialFunction, v2: RadialFunction, at: int) -> float:
    """
    W = psi1 psi2' - psi1' psi2 of psi = v/r at grid index `at`.

    Derivatives use the five-point central difference, so `at` must lie in
    [2, n-3].
    """
    v1.check_same_grid(v2)
    grid = v1.grid
    n = grid.n_points
    if not 2 <= at <= n - 3:
        raise SCFInputError(f"wronskian index {at} must lie in [2, {n - 3}]")
    window = slice(at - 2, at + 3)
    r = grid.r_values[window]
    psi1 = v1.values[window] / r
    psi2 = v2.values[window] / r
    stencil = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12.0 * grid.spacing)
    d1 = float(stencil @ psi1)
    d2 = float(stencil @ psi2)
    return float(psi1[2] * d2 - d1 * psi2[2])


def eigen_residual(state: BoundState, potential: EffectivePotential, hbar: float = 1.0) -> float:
    """
    Max-norm residual of -(hbar^2/2m) v'' + (u - eps) v over interior points.

    Evaluated with the compact fourth-order stencil the sweep satisfies,
    (hbar^2/2m) [(q+ v+ + 10 q v + q- v-)/12 - (v+ - 2v + v-)/h^2]
    with q = 2m(u - eps)/hbar^2.
    """
    state.psi.check_same_grid(potential.u)
    h = state.grid.spacing
    v = state.v.values
    scale = hbar**2 / (2.0 * state.mass)
    qv = (potential.u.values - state.energy) * v / scale
    second = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
    source = (qv[2:] + 10.0 * qv[1:-1] + qv[:-2]) / 12.0
    residual = scale * (source - second)
    if residual.size == 0:
        return 0.0
    return float(np.max(np.abs(residual)))


def probability_current(state: BoundState, hbar: float = 1.0) -> np.ndarray:
    """
    Radial probability current (i hbar / 2m)(psi conj(psi') - conj(psi) psi').

    Returned as a complex array so a non-zero imaginary part would show; for
    a real psi it vanishes identically.
    """
    psi = state.psi.values.astype(complex)
    dpsi = np.gradient(psi, state.grid.spacing, edge_order=2)
    return (1j * hbar / (2.0 * state.mass)) * (psi * np.conj(dpsi) - np.conj(psi) * dpsi)
