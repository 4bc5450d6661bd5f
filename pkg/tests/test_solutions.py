"""
Tests for solution counts, reconstruction and the bifurcation branch.
"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from hessian_lv.analysis.exponents import lambda_bar, mu_star
from hessian_lv.analysis.phase import PhasePoint
from hessian_lv.dynamics.integrator import (Termination, integrate_orbit,
                                            level_crossings)
from hessian_lv.dynamics.ivp import phase_to_profile
from hessian_lv.dynamics.series import series_profile
from hessian_lv.errors import DomainError
from hessian_lv.solutions.branch import (bifurcation_diagram, branch_values,
                                         count_solutions, default_grid,
                                         lambda_star_lower_bound,
                                         reconstruct_all,
                                         reconstruct_solution)
from hessian_lv.solutions.closed_form import (critical_solutions,
                                              extremal_solution)
from hessian_lv.solutions.residuals import khessian_residual


def test_counts_node(orbit_b, params_b):
    """One solution below lambda~, none above it."""
    for lam in (0.5, 2.0, 4.0):
        assert count_solutions(orbit_b, lam, params_b) == (1, False)
    assert count_solutions(orbit_b, 5.75, params_b) == (0, False)


def test_counts_spiral(orbit_a, params_a):
    """Many solutions at and near lambda~; the count at lambda~ is saturated."""
    count, saturated = count_solutions(orbit_a, 2.0, params_a)
    assert count >= 3
    assert saturated
    count, _ = count_solutions(orbit_a, 0.999 * 2.0, params_a)
    assert count >= 2


def test_counts_critical_are_exact(orbit_center, params_center):
    """At q* the heteroclinic orbit gives exactly two solutions below mu*, unsaturated."""
    assert orbit_center.terminated == Termination.REACHED_SADDLE
    for lam in (0.5 * mu_star(params_center), 0.2):
        # Check against the closed-form pair
        assert len(critical_solutions(lam, params_center)) == 2
        assert count_solutions(orbit_center, lam, params_center) == (2, False)


def test_count_rejects_nonpositive_lambda(orbit_a, params_a):
    with pytest.raises(DomainError):
        count_solutions(orbit_a, 0.0, params_a)


def test_reconstruction_node(orbit_b, params_b):
    """The solution at lambda = 2 vanishes on the boundary and solves the equation."""
    t0 = level_crossings(orbit_b, 2.0, params_b)[0]
    solution = reconstruct_solution(orbit_b, t0, params_b)
    assert solution.lam == pytest.approx(2.0, abs=1e-9)
    assert abs(solution.u[-1]) < 1e-8
    assert solution.u[0] == pytest.approx(solution.u0)
    assert solution.u0 < 0
    assert np.all(np.diff(solution.u) > 0)
    assert khessian_residual(solution, params_b) < 1e-4

    # Check the exact derivative against finite differences
    slope = np.gradient(solution.u, solution.r, edge_order=2)
    assert np.max(np.abs(slope - solution.du)[1:-1]) < 1e-3


def test_early_orbit_continues_series(orbit_b, params_b):
    """Past the launch radius the orbit's profile continues the series: v > -1, increasing."""
    shift = orbit_b.time_shift
    t = np.linspace(0.0, math.log(4.0), 400)
    x, y = orbit_b.evaluate(t)
    v = phase_to_profile(t + shift, x, y, lambda_bar(params_b), params_b)
    v_series, _ = series_profile(np.exp(t + shift), params_b)

    # Continuous at the handoff and close to the series just past it
    assert v[0] == pytest.approx(v_series[0], abs=1e-12)
    assert np.max(np.abs(v - v_series)) < 1e-9
    assert np.all(v > -1.0)
    assert np.all(np.diff(v) > 0)


def test_reconstruction_monotone_across_handoff(orbit_b, params_b):
    """u increases on a fine grid around the launch radius."""
    t0 = level_crossings(orbit_b, 2.0, params_b)[0]
    s0 = math.exp(t0 + orbit_b.time_shift)
    s_launch = math.exp(orbit_b.time_shift)
    grid = np.concatenate(([0.0], np.geomspace(0.1 * s_launch / s0, 1.0, 3000)))
    solution = reconstruct_solution(orbit_b, t0, params_b, grid)
    assert np.all(np.diff(solution.u) > 0)
    assert abs(solution.u[-1]) < 1e-8


def test_reconstruction_spiral_is_multiple(orbit_a, params_a):
    """Distinct solutions with distinct u(0) at 0.999 lambda~."""
    lam = 0.999 * 2.0
    times = level_crossings(orbit_a, lam, params_a)
    solutions = reconstruct_all(orbit_a, times, params_a, default_grid(400))
    assert len(solutions) == len(times) >= 2
    u0 = sorted(s.u0 for s in solutions)
    assert np.all(np.diff(u0) > 1e-6)
    for solution in solutions:
        assert abs(solution.u[-1]) < 1e-8
        assert solution.lam == pytest.approx(lam, abs=1e-9)


def test_reconstruction_matches_extremal(orbit_center, params_center):
    """At q* the crossing x = (n + sigma)/(k + 1) reproduces u*."""
    t0 = brentq(lambda t: orbit_center.evaluate(t)[0] - 2.5,
                orbit_center.t_start, orbit_center.t_end, xtol=1e-14)
    grid = np.linspace(0.0, 1.0, 201)
    solution = reconstruct_solution(orbit_center, t0, params_center, grid)
    extremal = extremal_solution(params_center)
    assert solution.lam == pytest.approx(extremal.lam, rel=1e-8)
    assert np.max(np.abs(solution.u - extremal(grid))) < 1e-5


def test_bifurcation_node(orbit_b, params_b):
    """Lambda increases to lambda~ and A decreases along the branch."""
    t_grid = np.linspace(orbit_b.t_start, orbit_b.t_end, 400)
    samples = bifurcation_diagram(orbit_b, params_b, t_grid)
    lam = np.array([s.lam for s in samples])
    A = np.array([s.A for s in samples])
    below = lam < 4.75 - 1e-6
    assert np.all(np.diff(lam[below]) > 0)
    assert np.all(np.diff(A[200:]) < 0)
    assert lam[0] < 0.01 * 4.75


def test_bifurcation_spiral(orbit_a, params_a):
    """Lambda oscillates around lambda~."""
    t_grid = np.linspace(orbit_a.t_start, orbit_a.t_end, 2000)
    lam = np.array([s.lam for s in bifurcation_diagram(orbit_a, params_a, t_grid)])
    signs = np.sign(lam - 2.0)
    changes = np.count_nonzero(signs[1:] * signs[:-1] < 0)
    assert changes >= 3
    assert lam[0] < 0.01 * 2.0


def test_bifurcation_range(orbit_a, params_a):
    with pytest.raises(DomainError):
        bifurcation_diagram(orbit_a, params_a, [orbit_a.t_end + 1.0])


def test_branch_values_vectorised(orbit_b, params_b):
    lam, A = branch_values(orbit_b, [1.0, 2.0, 3.0], params_b)
    assert lam.shape == A.shape == (3,)


def test_lambda_star_lower_bound(orbit_a, orbit_b, params_a, params_b):
    """sup Lambda is lambda~ for a node and exceeds it for a spiral."""
    assert lambda_star_lower_bound(orbit_b, params_b) == pytest.approx(4.75, abs=1e-4)
    assert lambda_star_lower_bound(orbit_a, params_a) > 2.0


def test_reconstruction_needs_saddle_launch(params_center):
    orbit = integrate_orbit(params_center, start=PhasePoint(1.5, 1.0))
    with pytest.raises(DomainError):
        reconstruct_solution(orbit, 0.5, params_center)


if __name__ == "__main__":
    # Run tests manually
    pytest.main([__file__])
