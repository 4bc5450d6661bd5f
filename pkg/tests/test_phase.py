"""
Tests for the phase-plane analysis.
"""
import numpy as np
import pytest

from hessian_lv.analysis.exponents import q_jl, validate_params
from hessian_lv.analysis.phase import (AsymptoticSlopes, ComplexCase,
                                       InfinityKind, PhasePoint, PointKind,
                                       asymptotic_slopes,
                                       finite_critical_points,
                                       general_vector_field, infinity_points,
                                       interior_jacobian,
                                       invariant_line_residual, jacobian,
                                       launch_slope, poincare_index,
                                       vector_field)
from hessian_lv.errors import DomainError


def test_vector_field_examples(params_a):
    """The field vanishes at the origin, the saddle and the interior point."""
    assert vector_field(PhasePoint(0, 0), params_a) == (0, 0)
    assert vector_field(PhasePoint(5, 0), params_a) == (0, 0)
    assert vector_field(PhasePoint(2, 1), params_a) == (0, 0)


def test_general_field_reduces_to_power_weight(params_b):
    """With rho = n + sigma the weighted field is the autonomous one."""
    p = PhasePoint(3.0, 0.7)
    assert general_vector_field(p, 12.0, params_b) == vector_field(p, params_b)


def test_critical_points_set_a(params_a):
    """Four points, three saddles and one sink, indices summing to -2."""
    points = finite_critical_points(params_a)
    assert len(points) == 4
    locations = [(c.location.x, c.location.y) for c in points]
    assert locations[:3] == [(0.0, 0.0), (5.0, 0.0), (0.0, 3.0)]
    assert [c.poincare_index for c in points] == [-1, -1, -1, 1]
    assert sum(c.poincare_index for c in points) == -2
    for c in points:
        dx, dy = vector_field(c.location, params_a)
        assert np.hypot(dx, dy) < 1e-12


def test_critical_points_without_interior():
    """Below (n+sigma)k/(n-2k) only the boundary points remain."""
    params = validate_params(5, 1, 0, 1.05)
    assert len(finite_critical_points(params)) == 3


def test_critical_points_set_b(params_b):
    """Interior point (9.5, 0.5) with index +1."""
    interior = finite_critical_points(params_b)[-1]
    assert interior.location.x == pytest.approx(9.5)
    assert interior.location.y == pytest.approx(0.5)
    assert interior.poincare_index == 1
    assert poincare_index(interior.location, params_b) == 1


def test_interior_jacobian_spiral(params_a):
    """tr = -1, det = 4, eigenvalues -0.5 ± 1.936492i."""
    point = interior_jacobian(params_a)
    jac = point.jacobian
    assert np.trace(jac) == pytest.approx(-1.0)
    assert np.linalg.det(jac) == pytest.approx(4.0)
    assert point.eigenvalues[0].real == pytest.approx(-0.5)
    assert abs(point.eigenvalues[0].imag) == pytest.approx(1.936492, abs=1e-6)
    assert point.kind == PointKind.SPIRAL_SINK
    assert np.allclose(jac, jacobian(point.location, params_a))


def test_interior_jacobian_node(params_b):
    """tr = -9, det = 19, two negative real eigenvalues."""
    point = interior_jacobian(params_b)
    assert np.trace(point.jacobian) == pytest.approx(-9.0)
    assert all(abs(e.imag) == 0 and e.real < 0 for e in point.eigenvalues)
    assert point.kind == PointKind.NODE_SINK


def test_interior_jacobian_center(params_center):
    """Purely imaginary eigenvalues at q*."""
    point = interior_jacobian(params_center)
    assert point.kind == PointKind.CENTER
    assert all(e.real == 0 and e.imag != 0 for e in point.eigenvalues)


def test_interior_jacobian_requires_interior_point():
    """DomainError when the interior point is outside the quadrant."""
    with pytest.raises(DomainError):
        interior_jacobian(validate_params(5, 1, 0, 1.05))


def test_trace_and_determinant_signs():
    """tr J < 0 iff q > q*, det J > 0 whenever the interior point exists."""
    for q in (1.8, 2.0, 2.5, 3.0, 6.0):
        params = validate_params(5, 1, 0, q)
        jac = interior_jacobian(params).jacobian
        assert (np.trace(jac) < 0) == (q > 7 / 3)
        assert np.linalg.det(jac) > 0


def test_infinity_points(params_a):
    """u = 0 gives (1, 2); u = -1/2 gives (-1/2, -1); both nodes."""
    points = infinity_points(params_a)
    assert (points[0].u, points[0].lambda_z, points[0].lambda_u) == (0.0, 1.0, 2.0)
    assert points[1].u == pytest.approx(-0.5)
    assert points[1].lambda_z == pytest.approx(-0.5)
    assert points[1].lambda_u == pytest.approx(-1.0)
    assert all(p.kind == InfinityKind.NODE for p in points)
    assert points[2].rotated_chart and not points[0].rotated_chart


def test_infinity_points_k2():
    """k=2, q=4: u = -3/10, lambda_z = -0.2, lambda_u = -0.9."""
    points = infinity_points(validate_params(9, 2, 0, 4))
    assert points[1].u == pytest.approx(-0.3)
    assert points[1].lambda_z == pytest.approx(-0.2)
    assert points[1].lambda_u == pytest.approx(-0.9)
    for point in points[:2]:
        assert 3 * point.u / 2 + 5 * point.u ** 2 == pytest.approx(0.0, abs=1e-15)
        assert point.lambda_z * point.lambda_u > 0


def test_launch_slope(params_a, params_b):
    """gamma_s = -7/15 and -14/60, the slope of the unstable eigenvector."""
    assert launch_slope(params_a) == pytest.approx(-7 / 15)
    assert launch_slope(params_b) == pytest.approx(-14 / 60)
    for params in (params_a, params_b, validate_params(9, 2, 1, 5)):
        rho = params.n + params.sigma
        values, vectors = np.linalg.eig(jacobian(PhasePoint(rho, 0.0), params))
        unstable = np.argmax(values.real)
        k = params.k
        assert values[unstable].real == pytest.approx((2 * k + params.sigma) / k)
        vector = vectors[:, unstable].real
        assert vector[1] / vector[0] == pytest.approx(launch_slope(params))


def test_asymptotic_slopes_node(params_b):
    """Real slopes in the node regime."""
    slopes = asymptotic_slopes(params_b)
    assert isinstance(slopes, AsymptoticSlopes)
    assert slopes.gamma_plus == pytest.approx(-0.081725, abs=1e-6)
    assert slopes.gamma_minus == pytest.approx(-0.128801, abs=1e-6)


def test_asymptotic_slopes_spiral(params_a):
    """Complex roots in the spiral regime."""
    assert isinstance(asymptotic_slopes(params_a), ComplexCase)


def test_asymptotic_slopes_double_root():
    """At q_JL the two slopes coincide."""
    params = validate_params(12, 1, 0, 5)
    slopes = asymptotic_slopes(params.with_q(q_jl(params)))
    assert isinstance(slopes, AsymptoticSlopes)
    assert abs(slopes.gamma_plus - slopes.gamma_minus) < 1e-6


def test_invariant_line_is_tangent(params_center):
    """At q* the field is tangent to the invariant segment."""
    n, k = params_center.n, params_center.k
    rho, beta = n + params_center.sigma, (n - 2 * k) / k
    direction = np.array([rho, -beta])
    for x in np.linspace(0.0, rho, 21):
        y = beta * (1 - x / rho)
        point = PhasePoint(x, max(y, 0.0))
        assert abs(invariant_line_residual(point, params_center)) < 1e-12
        dx, dy = vector_field(point, params_center)
        assert abs(dx * direction[1] - dy * direction[0]) < 1e-10


def test_phase_point_rejects_negative():
    """Points outside the closed quadrant are invalid."""
    with pytest.raises(DomainError):
        PhasePoint(-1.0, 0.0)


if __name__ == "__main__":
    # Run tests manually
    pytest.main([__file__])
