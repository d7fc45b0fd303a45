import numpy as np
import pytest

from scfhydrogen.exceptions import (
    SCFConvergenceError,
    SCFEnergyError,
    SCFInputError,
    SCFNoBoundStateError,
)
from scfhydrogen.grid import RadialFunction, RadialGrid
from scfhydrogen.radial import (
    BoundState,
    EffectivePotential,
    SweepDirection,
    count_nodes,
    eigen_residual,
    find_bound_state,
    integrate_numerov,
    probability_current,
    wronskian,
)
from scfhydrogen.reference.coulomb import hydrogen_2s_shape, reduced_mass


def coulomb(grid: RadialGrid, charge: float = 1.0) -> EffectivePotential:
    return EffectivePotential(RadialFunction.from_callable(grid, lambda r: -charge / r))


@pytest.mark.unit
class TestIntegrateNumerov:
    """Tests for the Numerov sweeps"""

    @pytest.fixture
    def grid(self):
        return RadialGrid.from_extent(0.002, 40.0)

    def test_free_outward_sweep_grows(self):
        grid = RadialGrid.from_extent(0.01, 10.0)
        potential = EffectivePotential(RadialFunction.zeros(grid))
        v = integrate_numerov(potential, 1.0, -0.5, SweepDirection.OUTWARD, 100)
        segment = v.values[:101]
        assert np.all(segment > 0.0)
        assert np.all(np.diff(segment) > 0.0)
        assert np.all(v.values[101:] == 0.0)
        assert count_nodes(v) == 0
        # v = sinh(kappa r)/kappa
        np.testing.assert_allclose(segment, np.sinh(grid.r_values[:101]), rtol=1e-6)

    def test_outward_sweep_follows_1s(self, grid):
        match = int(round(2.0 / grid.spacing)) - 1
        v = integrate_numerov(coulomb(grid), 1.0, -0.5, "outward", match)
        r = grid.r_values[: match + 1]
        exact = r * np.exp(-r)
        np.testing.assert_allclose(
            v.values[: match + 1] / v.values[match], exact / exact[-1], rtol=1e-6
        )

    def test_inward_sweep_follows_1s(self, grid):
        match = int(round(2.0 / grid.spacing)) - 1
        v = integrate_numerov(coulomb(grid), 1.0, -0.5, "inward", match)
        window = slice(match, match + 501)
        r = grid.r_values[window]
        exact = r * np.exp(-r)
        np.testing.assert_allclose(v.values[window] / v.values[match], exact / exact[0], rtol=1e-6)
        assert np.all(v.values[:match] == 0.0)

    def test_inward_energy_above_tail(self, grid):
        with pytest.raises(SCFEnergyError):
            integrate_numerov(coulomb(grid), 1.0, 0.1, SweepDirection.INWARD, 100)

    def test_energy_error_is_input_error(self, grid):
        with pytest.raises(SCFInputError):
            integrate_numerov(coulomb(grid), 1.0, 0.0, SweepDirection.INWARD, 100)

    @pytest.mark.parametrize("match", [0, 1])
    def test_match_index_at_origin(self, grid, match):
        with pytest.raises(SCFInputError):
            integrate_numerov(coulomb(grid), 1.0, -0.5, SweepDirection.OUTWARD, match)

    def test_match_index_at_boundary(self, grid):
        with pytest.raises(SCFInputError):
            integrate_numerov(coulomb(grid), 1.0, -0.5, SweepDirection.OUTWARD, grid.n_points - 2)

    def test_grid_too_coarse(self):
        grid = RadialGrid.from_extent(0.1, 10.0)
        potential = EffectivePotential(RadialFunction.zeros(grid))
        with pytest.raises(SCFInputError):
            integrate_numerov(potential, 1.0, -1.0e6, SweepDirection.OUTWARD, 50)

    def test_overflow_is_rescaled(self):
        grid = RadialGrid.from_extent(0.01, 40.0)
        potential = EffectivePotential(RadialFunction.zeros(grid))
        v = integrate_numerov(potential, 1.0, -50.0, SweepDirection.OUTWARD, grid.n_points - 3)
        assert np.all(np.isfinite(v.values))
        assert np.max(np.abs(v.values)) <= 1e100
        assert count_nodes(v) == 0


@pytest.mark.unit
class TestCountNodes:
    """Tests for sign-change counting"""

    def test_nodeless(self):
        grid = RadialGrid.from_extent(0.01, 30.0)
        assert count_nodes(RadialFunction.from_callable(grid, lambda r: r * np.exp(-r))) == 0

    def test_2s_shape(self):
        grid = RadialGrid.from_extent(0.01, 30.0)
        assert count_nodes(hydrogen_2s_shape(grid, 1.0)) == 1

    def test_identically_zero(self):
        with pytest.raises(SCFInputError):
            count_nodes(RadialFunction.zeros(RadialGrid(10, 0.1)))

    def test_exact_zeros_are_skipped(self):
        grid = RadialGrid(6, 1.0)
        assert count_nodes(RadialFunction(grid, [1.0, 0.0, 2.0, 0.0, -1.0, 0.0])) == 1


class TestFindBoundState:
    """Tests for the shooting eigensolver against the Coulomb spectrum"""

    @pytest.fixture(scope="class")
    def grid(self):
        return RadialGrid.from_extent(0.002, 60.0)

    @pytest.fixture(scope="class")
    def ground_state(self, grid):
        return find_bound_state(coulomb(grid), 1.0, 0, bracket=(-2.0, -1e-4))

    @pytest.mark.unit
    def test_ground_state(self, ground_state):
        assert ground_state.energy == pytest.approx(-0.5, rel=1e-6)
        assert ground_state.nodes == 0
        assert ground_state.mass == 1.0

    @pytest.mark.unit
    def test_ground_state_shape(self, ground_state, grid):
        exact = np.exp(-grid.r_values) / np.sqrt(np.pi)
        np.testing.assert_allclose(ground_state.psi.values, exact, atol=1e-5)

    @pytest.mark.unit
    def test_normalized_and_positive(self, ground_state):
        assert ground_state.normalization() == pytest.approx(1.0, abs=1e-8)
        assert ground_state.psi.values[0] > 0.0

    @pytest.mark.unit
    def test_moments(self, ground_state):
        assert ground_state.moment(1) == pytest.approx(1.5, rel=1e-5)
        assert ground_state.moment(2) == pytest.approx(3.0, rel=1e-5)

    @pytest.mark.parametrize("nodes, n", [(0, 1), (1, 2), (2, 3)])
    def test_coulomb_spectrum(self, grid, nodes, n):
        state = find_bound_state(coulomb(grid), 1.0, nodes)
        assert state.energy == pytest.approx(-1.0 / (2.0 * n * n), rel=1e-6)
        assert state.nodes == nodes
        v = state.v.values
        assert int(np.count_nonzero(np.diff(np.sign(v[v != 0.0])))) == nodes

    def test_reduced_mass_scaling(self, grid):
        mass = reduced_mass(1836.15267343, 1.0)
        state = find_bound_state(coulomb(grid), mass, 0)
        assert state.energy == pytest.approx(-mass / 2.0, rel=1e-6)

    @pytest.mark.slow
    def test_proton_mass_scaling(self):
        mass = 1836.15267343
        grid = RadialGrid.from_extent(1e-6, 0.025)
        state = find_bound_state(coulomb(grid), mass, 0)
        assert state.energy == pytest.approx(-mass / 2.0, rel=1e-5)

    def test_shift_covariance(self, grid, ground_state):
        shifted = find_bound_state(coulomb(grid).shifted(-0.3), 1.0, 0, bracket=(-2.3, -0.3 - 1e-4))
        assert shifted.energy == pytest.approx(ground_state.energy - 0.3, abs=1e-8)

    def test_harmonic_oscillator(self):
        grid = RadialGrid.from_extent(0.01, 10.0)
        u = RadialFunction.from_callable(grid, lambda r: 0.5 * r * r)
        potential = EffectivePotential(u, tail_limit=float(u.values[-1]))
        assert find_bound_state(potential, 1.0, 0).energy == pytest.approx(1.5, abs=1e-6)
        assert find_bound_state(potential, 1.0, 1).energy == pytest.approx(3.5, abs=1e-6)

    def test_free_particle_has_no_bound_state(self, grid):
        potential = EffectivePotential(RadialFunction.zeros(grid))
        with pytest.raises(SCFNoBoundStateError):
            find_bound_state(potential, 1.0, 0, bracket=(-1.0, -1e-4))
        with pytest.raises(SCFNoBoundStateError):
            find_bound_state(potential, 1.0, 0)

    def test_repulsive_potential(self, grid):
        potential = EffectivePotential(RadialFunction.from_callable(grid, lambda r: 1.0 / r))
        with pytest.raises(SCFNoBoundStateError) as exc_info:
            find_bound_state(potential, 1.0, 0)
        assert exc_info.value.particle is None

    def test_target_outside_bracket(self, grid):
        with pytest.raises(SCFNoBoundStateError):
            find_bound_state(coulomb(grid), 1.0, 0, bracket=(-0.4, -0.01))

    @pytest.mark.parametrize("bracket", [(-0.1, -0.2), (-1.0, 0.5)])
    def test_malformed_bracket(self, grid, bracket):
        with pytest.raises(SCFInputError):
            find_bound_state(coulomb(grid), 1.0, 0, bracket=bracket)

    def test_negative_node_target(self, grid):
        with pytest.raises(SCFInputError):
            find_bound_state(coulomb(grid), 1.0, -1)

    def test_iteration_cap(self, grid):
        with pytest.raises(SCFConvergenceError) as exc_info:
            find_bound_state(coulomb(grid), 1.0, 0, max_iter=3)
        lo, hi = exc_info.value.bracket
        assert lo < hi


@pytest.mark.unit
class TestDiagnostics:
    """Tests for the Wronskian, eigenvalue residual and probability current"""

    @pytest.fixture(scope="class")
    def grid(self):
        return RadialGrid.from_extent(0.002, 40.0)

    @pytest.fixture(scope="class")
    def state(self, grid):
        return find_bound_state(coulomb(grid), 1.0, 0)

    def test_wronskian_of_dependent_functions(self, state):
        v = state.v
        assert wronskian(v, v, 500) == 0.0
        assert wronskian(v, 2.0 * v, 500) == pytest.approx(0.0, abs=1e-12)

    def test_wronskian_law(self, grid):
        n = grid.n_points
        v_out = integrate_numerov(coulomb(grid), 1.0, -0.3, "outward", n - 3)
        v_in = integrate_numerov(coulomb(grid), 1.0, -0.3, "inward", 2)
        indices = np.linspace(n // 4, 3 * n // 4, 11).astype(int)
        scaled = np.array([grid.r_values[i] ** 2 * wronskian(v_out, v_in, i) for i in indices])
        assert np.all(scaled != 0.0)
        spread = (scaled.max() - scaled.min()) / np.abs(scaled).max()
        assert spread < 1e-6

    def test_wronskian_vanishes_at_eigenvalue(self, grid, state):
        match = int(round(2.0 / grid.spacing)) - 1
        at = match - 100

        def matched_wronskian(energy):
            v_out = integrate_numerov(coulomb(grid), 1.0, energy, "outward", match)
            v_in = integrate_numerov(coulomb(grid), 1.0, energy, "inward", at - 2)
            v_out = RadialFunction(grid, v_out.values / v_out.values[at])
            v_in = RadialFunction(grid, v_in.values / v_in.values[at])
            return wronskian(v_out, v_in, at)

        assert abs(matched_wronskian(state.energy)) < 1e-3 * abs(matched_wronskian(-0.45))

    @pytest.mark.parametrize("at", [0, 1, -1])
    def test_wronskian_at_boundary(self, state, at):
        v = state.v
        index = at if at >= 0 else v.grid.n_points - 2
        with pytest.raises(SCFInputError):
            wronskian(v, v, index)

    def test_wronskian_grid_mismatch(self, state):
        other = RadialFunction.zeros(RadialGrid(100, 0.1))
        with pytest.raises(SCFInputError):
            wronskian(state.v, other, 50)

    def test_eigen_residual(self, grid, state):
        bound = 10.0 * grid.spacing**2 * np.max(np.abs(state.energy * state.v.values))
        assert eigen_residual(state, coulomb(grid)) <= bound

    def test_eigen_residual_well_inside_discretization_bound(self, grid, state):
        bound = grid.spacing**2 * np.max(np.abs(state.energy * state.v.values))
        assert eigen_residual(state, coulomb(grid)) < 1e-2 * bound

    def test_eigen_residual_detects_wrong_energy(self, grid, state):
        wrong = BoundState(energy=state.energy + 0.01, psi=state.psi, nodes=0, mass=1.0)
        assert eigen_residual(wrong, coulomb(grid)) > 100.0 * eigen_residual(state, coulomb(grid))

    def test_probability_current_vanishes(self, state):
        current = probability_current(state)
        assert np.iscomplexobj(current)
        assert np.all(current.real == 0.0)
        assert np.all(current.imag == 0.0)


@pytest.mark.unit
class TestEffectivePotential:
    """Tests for the potential wrapper"""

    def test_non_finite_tail(self):
        with pytest.raises(SCFInputError):
            EffectivePotential(RadialFunction.zeros(RadialGrid(10, 0.1)), tail_limit=np.inf)

    def test_shifted(self):
        potential = EffectivePotential(RadialFunction.zeros(RadialGrid(10, 0.1)), tail_limit=0.5)
        shifted = potential.shifted(-1.0)
        assert shifted.tail_limit == -0.5
        np.testing.assert_array_equal(shifted.u.values, -1.0)
