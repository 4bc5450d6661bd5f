"""
Tests for orbit integration and level crossings.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import brentq

from hessian_lv.analysis.exponents import validate_params
from hessian_lv.analysis.phase import (PhasePoint, invariant_line_residual,
                                      unstable_direction)
from hessian_lv.dynamics.integrator import (IntegratorConfig, Termination,
                                            integrate_orbit, is_monotone_graph,
                                            lambda_profile, level_crossings)
from hessian_lv.dynamics.series import series_phase_point
from hessian_lv.errors import DomainError, NonConvergence, RegimeError
from hessian_lv.solutions.closed_form import critical_orbit


def test_set_a_reaches_sink(orbit_a):
    """Spiral orbit ends within 1e-6 of (2, 1)."""
    assert orbit_a.terminated == Termination.REACHED_SINK
    x, y = orbit_a.xy[-1]
    assert np.hypot(x - 2.0, y - 1.0) < 1e-6


def test_set_b_reaches_sink(orbit_b):
    """Node orbit ends within 1e-6 of (9.5, 0.5) as a monotone graph."""
    assert orbit_b.terminated == Termination.REACHED_SINK
    x, y = orbit_b.xy[-1]
    assert np.hypot(x - 9.5, y - 0.5) < 1e-6
    assert np.all(np.diff(orbit_b.xy[:, 1]) > 0)
    assert is_monotone_graph(orbit_b)


def test_launch_along_unstable_eigenvector(orbit_a, orbit_b, params_a, params_b):
    """The start point sits at the launch offset along the unstable eigenvector."""
    for orbit, params in ((orbit_a, params_a), (orbit_b, params_b)):
        offset = IntegratorConfig().launch_offset(params)
        saddle = np.array([params.n + params.sigma, 0.0])
        expected = saddle + offset * unstable_direction(params)
        assert np.max(np.abs(orbit.xy[0] - expected)) < 1e-3 * offset


def test_launch_gauge_matches_series(orbit_a, orbit_b, params_a, params_b):
    """t = 0 is the radius s = exp(T) whose series image is the start point."""
    for orbit, params in ((orbit_a, params_a), (orbit_b, params_b)):
        x0, y0 = series_phase_point(math.exp(orbit.time_shift), params)
        assert orbit.xy[0, 0] == pytest.approx(x0, rel=1e-14)
        assert orbit.xy[0, 1] == pytest.approx(y0, rel=1e-14)
        # y starts at the scale of the offset and only grows at first
        assert 0 < y0 < 1e-6
        assert np.all(np.diff(orbit.xy[:5, 1]) > 0)


def test_spiral_is_not_monotone(orbit_a):
    """The spiral winds around the sink."""
    assert not is_monotone_graph(orbit_a)


def test_samples_stay_in_quadrant(orbit_a, orbit_b, orbit_center):
    """Samples remain in the open first quadrant."""
    for orbit in (orbit_a, orbit_b, orbit_center):
        assert np.all(orbit.xy > 0)
        assert np.all(np.diff(orbit.t) > 0)
        assert orbit.t_start == 0.0


def test_lambda_profile_endpoints(orbit_a, orbit_b, params_a, params_b):
    """Lambda starts near 0 and ends at lambda~."""
    lam_a = lambda_profile(orbit_a, params_a)
    lam_b = lambda_profile(orbit_b, params_b)
    assert lam_a(orbit_a.t_start) < 1e-3
    assert abs(lam_a(orbit_a.t_end) - 2.0) < 1e-4
    assert abs(lam_b(orbit_b.t_end) - 4.75) < 1e-4


def test_level_crossings_node(orbit_b, params_b):
    """Exactly one crossing of level 2 in the node regime."""
    crossings = level_crossings(orbit_b, 2.0, params_b)
    assert len(crossings) == 1
    assert abs(lambda_profile(orbit_b, params_b)(crossings[0]) - 2.0) < 1e-10


def test_level_crossings_spiral(orbit_a, params_a):
    """At least three refined crossings of lambda~ in the spiral regime."""
    crossings = level_crossings(orbit_a, 2.0, params_a)
    assert len(crossings) >= 3
    assert np.all(np.diff(crossings) > 0)
    lam = lambda_profile(orbit_a, params_a)
    assert all(abs(lam(t) - 2.0) < 1e-10 * 2.0 for t in crossings)


def test_level_above_maximum(orbit_b, params_b):
    """No crossing above sup Lambda."""
    assert level_crossings(orbit_b, 10.0, params_b) == []


def test_center_orbit_follows_invariant_line(orbit_center, params_center):
    """At q* the launch follows the invariant line to the saddle (0, 3)."""
    assert orbit_center.terminated == Termination.REACHED_SADDLE
    residual = max(abs(invariant_line_residual(p, params_center))
                   for _, p in orbit_center.samples)
    assert residual < 1e-6


def test_center_orbit_matches_closed_form(orbit_center, params_center):
    """After aligning x = (n + sigma)/2 at t = 0 the orbit is the explicit one."""
    # Align both clocks at x = (n + sigma)/2
    t_half = brentq(lambda t: orbit_center.evaluate(t)[0] - 2.5,
                    orbit_center.t_start, orbit_center.t_end, xtol=1e-14)
    t = orbit_center.t[orbit_center.t > 1.0]
    x, y = critical_orbit(1.0, params_center)(t - t_half)
    xy = orbit_center.evaluate(t)
    assert np.max(np.abs(xy[0] - x)) < 1e-6
    assert np.max(np.abs(xy[1] - y)) < 1e-6


def test_center_closed_orbit(params_center):
    """An interior start at q* returns to its section."""
    start = PhasePoint(1.5, 1.0)
    orbit = integrate_orbit(params_center, start=start)

    # Check that the orbit returned to its start
    assert orbit.terminated == Termination.CLOSED_ORBIT
    assert orbit.time_shift is None
    assert np.hypot(*(orbit.xy[-1] - start.as_array())) < 1e-6
    assert orbit.t_end > 1.0


def test_refinement_is_stable(params_a, orbit_a):
    """Halving the tolerances moves the end point by less than 10 sink radii."""
    cfg = IntegratorConfig(rel_tol=5e-11, abs_tol=5e-13)
    refined = integrate_orbit(params_a, cfg)
    assert np.hypot(*(refined.xy[-1] - orbit_a.xy[-1])) < 10 * cfg.sink_radius


def test_unstable_regime_refused():
    """q below q* is refused."""
    with pytest.raises(RegimeError):
        integrate_orbit(validate_params(5, 1, 0, 2))


def test_step_budget(params_a):
    """NonConvergence when max_steps runs out."""
    with pytest.raises(NonConvergence):
        integrate_orbit(params_a, IntegratorConfig(max_steps=5))


def test_time_limit(params_a):
    """A short window ends with TimeLimit."""
    orbit = integrate_orbit(params_a, IntegratorConfig(t_max=3.0))
    assert orbit.terminated == Termination.TIME_LIMIT
    assert orbit.t_end == pytest.approx(3.0)


def test_config_validation(params_a):
    """Loose tolerances and large launch offsets are rejected."""
    with pytest.raises(ValidationError):
        IntegratorConfig(rel_tol=1e-3)
    with pytest.raises(DomainError):
        IntegratorConfig(epsilon_launch=1.0).launch_offset(params_a)
    assert IntegratorConfig().launch_offset(params_a) == pytest.approx(5e-8)


def test_evaluate_outside_range(orbit_a):
    """Dense evaluation is limited to the orbit window."""
    with pytest.raises(DomainError):
        orbit_a.evaluate(orbit_a.t_end + 1.0)


if __name__ == "__main__":
    # Run tests manually
    pytest.main([__file__])
