"""
Self-consistent field driver for the proton + electron model.

Each step solves both radial problems in the current potential (+e phi for
the proton, -e phi for the electron), rebuilds the charge density and
regenerates the potential. The loop mixes potentials until the potential
and both levels stop changing.
"""
import logging
import math
import os
from dataclasses import dataclass, replace
from typing import List, Optional, Union

import numpy as np

from ..db.database_connection import DatabaseConnection
from ..electrostatics.poisson import (
    electric_field,
    gauge_constant,
    particle_density,
    solve_potential,
)
from ..exceptions import (
    SCFConfigurationError,
    SCFConvergenceError,
    SCFInputError,
    SCFNoBoundStateError,
    SCFStoreError,
)
from ..grid import RadialFunction, RadialGrid
from ..radial.bound_state import (
    BoundState,
    EffectivePotential,
    eigen_residual,
    find_bound_state,
    probability_current,
)
from ..reference.coulomb import screened_1s_potential, uniform_ball_potential
from .config import ScfConfig
from .mixing import AndersonMixer, LinearMixer
from .solution import EigenstateSolution, PartialPotentials, ResidualRecord

logger = logging.getLogger("scfhydrogen")

Potential = Union[RadialFunction, PartialPotentials]


@dataclass(frozen=True)
class StepResult:
    """Output of one unmixed SCF step."""

    psi_p: BoundState
    psi_e: BoundState
    phi_out: RadialFunction
    partial_out: PartialPotentials

    @property
    def E_p(self) -> float:
        return self.psi_p.energy

    @property
    def E_e(self) -> float:
        return self.psi_e.energy


def initial_partials(config: ScfConfig, grid: Optional[RadialGrid] = None) -> PartialPotentials:
    """
    Starting potentials of each particle for the analytic guesses.

    hydrogenic: 1s clouds of radius m_e/m_p (proton) and 1 (electron).
    uniform-ball: uniformly charged balls of radius ball_radius_p / ball_radius_e.
    user: columns phi_p and phi_e of the initial potential file.
    """
    grid = grid or config.grid
    e = config.constants.charge_e
    if config.initial_guess == "hydrogenic":
        radius_p = config.constants.mass_e / config.constants.mass_p
        return PartialPotentials(
            screened_1s_potential(grid, radius_p, e),
            screened_1s_potential(grid, 1.0, -e),
        )
    if config.initial_guess == "uniform-ball":
        return PartialPotentials(
            uniform_ball_potential(grid, config.ball_radius_p, e),
            uniform_ball_potential(grid, config.ball_radius_e, -e),
        )
    columns = _read_potential_file(config.initial_potential_file, grid)
    if "phi_p" not in columns or "phi_e" not in columns:
        raise SCFInputError(
            f"{config.initial_potential_file}: self_interaction=false needs columns phi_p and phi_e"
        )
    return PartialPotentials(RadialFunction(grid, columns["phi_p"]), RadialFunction(grid, columns["phi_e"]))


def initial_potential(config: ScfConfig, grid: Optional[RadialGrid] = None) -> RadialFunction:
    """
    Starting potential phi for the configured initial guess.

    Args:
        config: Validated run configuration
        grid: Grid override (defaults to the config's grid)

    Returns:
        phi on the grid; a user-supplied phi is returned unchanged
    """
    grid = grid or config.grid
    if config.initial_guess == "user":
        columns = _read_potential_file(config.initial_potential_file, grid)
        if "phi" not in columns:
            raise SCFInputError(f"{config.initial_potential_file}: missing column phi")
        return RadialFunction(grid, columns["phi"])
    return initial_partials(config, grid).total


def _read_potential_file(path: Optional[str], grid: RadialGrid):
    if not path or not os.path.exists(path):
        raise SCFInputError(f"initial potential file not found: {path}")
    try:
        with DatabaseConnection(":memory:") as db:
            columns = db.read_csv(path)
    except SCFStoreError as e:
        raise SCFInputError(f"{path}: unreadable initial potential ({e})") from e
    if "r" not in columns:
        raise SCFInputError(f"{path}: missing column r")
    r = columns["r"]
    if r.shape != grid.r_values.shape or not np.allclose(r, grid.r_values, rtol=1e-9, atol=0.0):
        raise SCFInputError(
            f"{path}: radii do not match the configured grid ({r.size} rows, {grid.n_points} grid points)"
        )
    return columns


def _solve_particle(
    particle: str, potential: EffectivePotential, mass: float, nodes: int, config: ScfConfig
) -> BoundState:
    hi = potential.tail_limit + config.energy_ceiling
    lo = config.energy_floor if config.energy_floor is not None else float(np.min(potential.u.values))
    if not lo < hi:
        raise SCFNoBoundStateError(
            f"potential has no well below its tail {potential.tail_limit:.6g} (floor {lo:.6g})",
            particle=particle,
        )
    try:
        return find_bound_state(
            potential,
            mass,
            nodes,
            bracket=(lo, hi),
            hbar=config.constants.hbar,
            max_iter=config.eigen_max_iter,
        )
    except SCFNoBoundStateError as e:
        raise SCFNoBoundStateError(e.detail, particle=particle) from e


def particle_potentials(phi_in: Potential, config: ScfConfig):
    """
    Potential energies (proton, electron) for the current iterate.

    With a total phi both particles feel it with opposite signs; with partial
    potentials each particle feels only the other one's field.
    """
    e = config.constants.charge_e
    if isinstance(phi_in, PartialPotentials):
        field_p, field_e = phi_in.phi_e, phi_in.phi_p
    else:
        field_p = field_e = phi_in
    u_p = EffectivePotential(e * field_p, e * gauge_constant(field_p))
    u_e = EffectivePotential(-e * field_e, -e * gauge_constant(field_e))
    return u_p, u_e


def scf_step(phi_in: Potential, config: ScfConfig) -> StepResult:
    """
    Solve both particles in phi_in and regenerate the potential; no mixing.

    Args:
        phi_in: Total potential, or PartialPotentials when self-interaction is off
        config: Run configuration

    Returns:
        StepResult with both states and phi_out = solve_potential(rho)

    Raises:
        SCFNoBoundStateError: If either particle has no bound state; particle
            is "proton", "electron" or "both"
    """
    constants = config.constants
    u_p, u_e = particle_potentials(phi_in, config)

    states = {}
    failures = []
    for particle, potential, mass, nodes in (
        ("proton", u_p, constants.mass_p, config.node_p),
        ("electron", u_e, constants.mass_e, config.node_e),
    ):
        try:
            states[particle] = _solve_particle(particle, potential, mass, nodes, config)
        except SCFNoBoundStateError as e:
            failures.append(e)
    if failures:
        if len(failures) == 1:
            particle, message = failures[0].particle, failures[0].detail
        else:
            particle, message = "both", "; ".join(str(e) for e in failures)
        logger.error(f"No bound state ({particle}): {message}")
        raise SCFNoBoundStateError(message, particle=particle)

    psi_p, psi_e = states["proton"], states["electron"]
    e = constants.charge_e
    partial_out = PartialPotentials(
        solve_potential(particle_density(psi_p, e)),
        solve_potential(particle_density(psi_e, -e)),
    )
    return StepResult(psi_p=psi_p, psi_e=psi_e, phi_out=partial_out.total, partial_out=partial_out)


def _as_vector(phi: Potential) -> np.ndarray:
    return phi.as_vector() if isinstance(phi, PartialPotentials) else phi.values


def _output_of(step: StepResult, self_interaction: bool) -> Potential:
    return step.phi_out if self_interaction else step.partial_out


def _from_vector(vector: np.ndarray, grid: RadialGrid, self_interaction: bool) -> Potential:
    if self_interaction:
        return RadialFunction(grid, vector)
    return PartialPotentials.from_vector(grid, vector)


def _make_mixer(config: ScfConfig):
    if config.mixer == "anderson":
        return AndersonMixer(config.mixing, config.anderson_history)
    return LinearMixer(config.mixing)


def _build_solution(
    step: StepResult,
    phi_in: Potential,
    config: ScfConfig,
    converged: bool,
    iterations: int,
    history: List[ResidualRecord],
) -> EigenstateSolution:
    phi = phi_in.total if isinstance(phi_in, PartialPotentials) else phi_in
    e = config.constants.charge_e
    rho = particle_density(step.psi_p, e) + particle_density(step.psi_e, -e)
    if not verify_zero_current(step.psi_p, step.psi_e, config.constants.hbar):
        logger.error(f"Probability current of a real state is not identically zero at iteration {iterations}")
        raise SCFConvergenceError(
            f"probability current does not vanish at iteration {iterations}",
            residual_history=list(history),
        )
    return EigenstateSolution(
        psi_p=step.psi_p,
        psi_e=step.psi_e,
        phi=phi,
        rho=rho,
        e_field=electric_field(phi),
        converged=converged,
        iterations=iterations,
        residual_history=tuple(history),
        potentials=phi_in if isinstance(phi_in, PartialPotentials) else None,
        gauge=gauge_constant(phi),
    )


def scf_solve(config: ScfConfig, initial: Optional[Potential] = None) -> EigenstateSolution:
    """
    Iterate scf_step and mixing to self-consistency.

    Converged when the unmixed potential update is below tol_phi and both
    level changes are below tol_energy. The returned phi is the input potential
    of the last step, the one the returned states solve.

    Args:
        config: Run configuration
        initial: Starting iterate overriding config.initial_guess; a
            PartialPotentials when self-interaction is off

    Returns:
        Converged EigenstateSolution

    Raises:
        SCFConfigurationError: If the config does not validate
        SCFNoBoundStateError: If a particle loses its bound state; carries the
            iteration and the residual history so far
        SCFConvergenceError: After max_iter iterations; carries the residual
            history and the last (unconverged) solution. Also raised, without
            a solution, when a state carries a non-zero probability current
    """
    errors = config.validate()
    if errors:
        raise SCFConfigurationError("invalid configuration", errors)
    grid = config.grid
    self_interaction = config.self_interaction

    if initial is None:
        phi_in: Potential = initial_potential(config, grid) if self_interaction else initial_partials(config, grid)
    else:
        phi_in = initial
    if self_interaction and isinstance(phi_in, PartialPotentials):
        phi_in = phi_in.total
    if not self_interaction and not isinstance(phi_in, PartialPotentials):
        raise SCFInputError("self_interaction=false iterates on PartialPotentials, got a single potential")

    mixer = _make_mixer(config)
    history: List[ResidualRecord] = []
    previous: Optional[StepResult] = None
    logger.info(
        f"SCF start: {grid.n_points} points, h={grid.spacing:g}, r_max={grid.r_max:g}, "
        f"guess={config.initial_guess}, mixer={config.mixer}({config.mixing:g}), "
        f"self_interaction={self_interaction}"
    )

    for iteration in range(1, config.max_iter + 1):
        try:
            step = scf_step(phi_in, config)
        except SCFNoBoundStateError as e:
            raise SCFNoBoundStateError(
                e.detail,
                particle=e.particle,
                iteration=iteration,
                residual_history=list(history),
            ) from e

        x_in = _as_vector(phi_in)
        x_out = _as_vector(_output_of(step, self_interaction))
        residual = float(np.max(np.abs(x_out - x_in)))
        delta_p = step.E_p - previous.E_p if previous else math.nan
        delta_e = step.E_e - previous.E_e if previous else math.nan
        history.append(ResidualRecord(iteration, residual, delta_p, delta_e))
        logger.info(
            f"SCF iteration {iteration}: |dphi|={residual:.3e} "
            f"E_p={step.E_p:.12g} E_e={step.E_e:.12g} dE_p={delta_p:.3e} dE_e={delta_e:.3e}"
        )

        if residual < config.tol_phi and abs(delta_p) < config.tol_energy and abs(delta_e) < config.tol_energy:
            solution = _build_solution(step, phi_in, config, True, iteration, history)
            _log_diagnostics(solution, config)
            logger.info(f"SCF converged in {iteration} iterations: E_total={solution.E_total:.12g}")
            return solution

        previous = step
        last_input = phi_in
        phi_in = _from_vector(mixer(x_in, x_out), grid, self_interaction)

    last_solution = _build_solution(previous, last_input, config, False, config.max_iter, history)
    logger.error(f"SCF did not converge in {config.max_iter} iterations (last |dphi|={history[-1].phi_residual:.3e})")
    raise SCFConvergenceError(
        f"SCF did not converge in {config.max_iter} iterations",
        residual_history=list(history),
        last_solution=last_solution,
    )


def _log_diagnostics(solution: EigenstateSolution, config: ScfConfig) -> None:
    u_p, u_e = particle_potentials(
        solution.potentials if solution.potentials is not None else solution.phi, config
    )
    hbar = config.constants.hbar
    logger.debug(
        f"Eigen residuals: proton {eigen_residual(solution.psi_p, u_p, hbar):.3e}, "
        f"electron {eigen_residual(solution.psi_e, u_e, hbar):.3e}; "
        f"total charge {solution.rho.total_charge():.3e}, gauge {solution.gauge:.3e}"
    )


def gauge_shift(solution: EigenstateSolution, constant: float, charge_e: float = 1.0) -> EigenstateSolution:
    """
    phi -> phi - C, E_p -> E_p - eC, E_e -> E_e + eC; wavefunctions untouched.

    E_total is unchanged up to rounding of the two shifted levels.
    """
    if constant == 0.0:
        return solution
    potentials = solution.potentials.shifted(-constant) if solution.potentials is not None else None
    return replace(
        solution,
        psi_p=replace(solution.psi_p, energy=solution.psi_p.energy - charge_e * constant),
        psi_e=replace(solution.psi_e, energy=solution.psi_e.energy + charge_e * constant),
        phi=solution.phi - constant,
        potentials=potentials,
        gauge=solution.gauge - constant,
    )


def verify_zero_current(psi_p: BoundState, psi_e: BoundState, hbar: float = 1.0) -> bool:
    """
    Check that the probability currents of both real states vanish identically.

    The weighted sum e j_p - e j_e is then zero as well.
    """
    for state in (psi_p, psi_e):
        current = probability_current(state, hbar)
        if np.any(current.real != 0.0) or np.any(current.imag != 0.0):
            return False
    return True
