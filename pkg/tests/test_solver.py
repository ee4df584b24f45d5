"""Projected-descent flows: ground, nodal, and multistart."""

import numpy as np
import pytest

from fracnodal import (
    NodalCollapseError,
    ParameterError,
    membership,
    multistart,
    nodal_projection,
    seed_nodal,
    solve_ground,
    solve_nodal,
    split,
)
from tests.conftest import make_problem


@pytest.fixture(scope="module")
def ground_report(problem_medium):
    seed = np.exp(-problem_medium.grid.nodes ** 2 / 0.25)
    return solve_ground(problem_medium, seed, tol=1e-6, max_iter=3000)


@pytest.fixture(scope="module")
def nodal_report(problem_medium):
    seed = seed_nodal(problem_medium.grid, (-1.0, 1.0), 0.5, 1.0)
    return solve_nodal(problem_medium, seed, tol=1e-6, max_iter=3000)


class TestSeed:
    def test_symmetric_centers_give_odd_seed(self, problem_small):
        u = seed_nodal(problem_small.grid, (-1.0, 1.0), 0.5, 1.0)
        scale = np.max(np.abs(u))
        assert np.max(np.abs(u + u[::-1])) <= 1e-14 * scale
        up, um = split(u)
        assert np.max(np.abs(up + um[::-1])) <= 1e-14 * scale

    def test_default_seed_changes_sign(self, problem_small):
        u = seed_nodal(problem_small.grid, (-1.0, 1.0), 0.5, 1.0)
        assert np.any(u > 1e-3) and np.any(u < -1e-3)

    def test_rejects_zero_amplitude(self, problem_small):
        with pytest.raises(ParameterError):
            seed_nodal(problem_small.grid, (-1.0, 1.0), 0.5, 0.0)

    def test_rejects_centers_outside_domain(self, problem_small):
        R = problem_small.grid.radius
        with pytest.raises(ParameterError):
            seed_nodal(problem_small.grid, (-2 * R, 1.0), 0.5, 1.0)

    def test_rejects_nonpositive_width(self, problem_small):
        with pytest.raises(ParameterError):
            seed_nodal(problem_small.grid, (-1.0, 1.0), -0.5, 1.0)


class TestGroundFlow:
    def test_converges(self, ground_report):
        assert ground_report.converged
        assert ground_report.residual <= 1e-6

    def test_one_signed(self, ground_report):
        assert not ground_report.sign_change

    def test_positive_energy(self, ground_report):
        assert ground_report.energy > 0.0

    def test_pure_power_energy_identity(self, problem_medium, ground_report):
        # on the constraint set the quartic energy equals (1/2 - 1/4) |u|^2
        n2 = problem_medium.norm_sq(ground_report.final_state)
        assert ground_report.energy == pytest.approx(0.25 * n2, rel=1e-6)

    def test_trace_strictly_decreasing(self, ground_report):
        trace = np.asarray(ground_report.energy_trace)
        assert np.all(np.diff(trace) < 0.0)

    def test_lands_on_nehari_set(self, problem_medium, ground_report):
        report = membership(problem_medium, ground_report.final_state, tol=1e-6)
        assert report.in_nehari
        assert not report.in_nodal_set

    def test_rejects_zero_seed(self, problem_medium):
        with pytest.raises(ParameterError):
            solve_ground(problem_medium, np.zeros(problem_medium.grid.n))

    def test_budget_exhaustion_reported(self, problem_medium):
        seed = np.exp(-problem_medium.grid.nodes ** 2 / 0.25)
        report = solve_ground(problem_medium, seed, tol=1e-12, max_iter=2)
        assert not report.converged
        assert "budget" in report.message


class TestNodalFlow:
    def test_converges_sign_changing(self, nodal_report):
        assert nodal_report.converged
        assert nodal_report.residual <= 1e-6
        assert nodal_report.sign_change

    def test_scales_return_to_unit(self, nodal_report):
        scales = nodal_report.scales_at_end
        assert scales.converged
        assert abs(scales.t_plus - 1.0) <= 1e-4
        assert abs(scales.s_minus - 1.0) <= 1e-4

    def test_energy_ordering(self, ground_report, nodal_report):
        assert 0.0 < ground_report.energy
        assert nodal_report.energy > ground_report.energy + 1e-8

    def test_lands_in_nodal_set(self, problem_medium, nodal_report):
        report = membership(problem_medium, nodal_report.final_state, tol=1e-6)
        assert report.in_nodal_set
        u = nodal_report.final_state
        pairing_sum = abs(problem_medium.derivative_pairing(u, split(u)[0])) + abs(
            problem_medium.derivative_pairing(u, split(u)[1])
        )
        assert pairing_sum <= 2e-6 * (1.0 + problem_medium.norm_sq(u))

    def test_odd_seed_keeps_odd_profile(self, nodal_report):
        u = nodal_report.final_state
        assert np.max(np.abs(u + u[::-1])) <= 1e-4 * np.max(np.abs(u))

    def test_reprojection_fixed_point(self, problem_medium, nodal_report):
        scales = nodal_projection(problem_medium, nodal_report.final_state)
        assert abs(scales.t_plus - 1.0) <= 1e-4
        assert abs(scales.s_minus - 1.0) <= 1e-4

    def test_trace_strictly_decreasing(self, nodal_report):
        trace = np.asarray(nodal_report.energy_trace)
        assert np.all(np.diff(trace) < 0.0)

    def test_collapse_error_for_lopsided_seed(self, problem_medium):
        x = problem_medium.grid.nodes
        seed = np.exp(-x ** 2 / 0.25) - 1e-9 * np.exp(-((x - 3.0) ** 2))
        with pytest.raises(NodalCollapseError):
            solve_nodal(problem_medium, seed, tol=1e-6, max_iter=3000, beta_config=1e-6)

    def test_rejects_one_signed_seed(self, problem_medium):
        with pytest.raises((ParameterError, NodalCollapseError)):
            solve_nodal(problem_medium, np.abs(np.sin(problem_medium.grid.nodes)) + 0.1)

    def test_decaying_coefficients_converge(self):
        problem = make_problem(radius=8.0, n=161,
                               V=1.0 / np.log(2.0 + np.abs(np.linspace(-8, 8, 161))),
                               K=1.0 / np.log(2.0 + np.abs(np.linspace(-8, 8, 161))))
        seed = seed_nodal(problem.grid, (-1.0, 1.0), 0.5, 1.0)
        report = solve_nodal(problem, seed, tol=1e-6, max_iter=3000)
        assert report.converged
        assert report.sign_change

    def test_other_order_and_exponent(self):
        problem = make_problem(radius=8.0, n=121, alpha=0.25, m=3.0)
        seed = seed_nodal(problem.grid, (-1.0, 1.0), 0.5, 1.0)
        report = solve_nodal(problem, seed, tol=1e-6, max_iter=3000)
        assert report.converged
        assert report.sign_change


class TestGroundFlowOtherModels:
    @pytest.mark.parametrize("model,m", [("positive_power", 4.0), ("log_model", 4.0)])
    def test_one_sided_sources(self, model, m):
        # these models vanish on negatives: ground states exist, nodal
        # states do not, so only the scalar flow applies
        problem = make_problem(radius=8.0, n=121, model=model, m=m)
        seed = np.exp(-problem.grid.nodes ** 2 / 0.25)
        report = solve_ground(problem, seed, tol=1e-6, max_iter=3000)
        assert report.converged
        assert not report.sign_change
        assert report.energy > 0.0


@pytest.fixture(scope="module")
def reports(problem_medium):
    grid = problem_medium.grid
    x = grid.nodes
    bump = np.exp(-x ** 2 / 0.25)
    pair = seed_nodal(grid, (-1.0, 1.0), 0.5, 1.0)
    seeds = [bump, -bump, pair, pair.copy()]
    return multistart(problem_medium, seeds, tol=1e-6, max_iter=3000)


class TestMultistart:
    def test_two_distinct_levels(self, reports):
        energies = [r.energy for r in reports]
        assert len(energies) >= 2
        assert max(energies) - min(energies) > 1e-4

    def test_sign_flip_and_duplicates_collapse(self, reports):
        # four seeds, two of them redundant (mirror bump, repeated pair)
        assert len(reports) == 2

    def test_sorted_by_energy(self, reports):
        energies = [r.energy for r in reports]
        assert energies == sorted(energies)

    def test_requires_odd_model(self):
        problem = make_problem(n=41, model="positive_power")
        with pytest.raises(ParameterError):
            multistart(problem, [np.ones(problem.grid.n)])
