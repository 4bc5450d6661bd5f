"""
Phase-plane analysis of the Lotka-Volterra system

    x' = x (n + sigma - x - q y)
    y' = y (-(n - 2k)/k + x/k + y)

critical points (finite and at infinity), Jacobian spectra, Poincare indices,
and the launch / asymptotic slopes of the orbit leaving (n + sigma, 0).
"""
import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from hessian_lv.analysis.exponents import (Params, Regime, a_sigma,
                                           classify_regime, existence_threshold,
                                           interior_point, q_star)
from hessian_lv.errors import DomainError
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


class PointKind(str, Enum):
    """Local type of a finite critical point."""
    SADDLE = "Saddle"
    CENTER = "Center"
    SPIRAL_SINK = "SpiralSink"
    NODE_SINK = "NodeSink"
    SPIRAL_SOURCE = "SpiralSource"
    NODE_SOURCE = "NodeSource"


class InfinityKind(str, Enum):
    """Type of a critical point at infinity."""
    NODE = "Node"
    SADDLE = "Saddle"


@dataclass(frozen=True)
class PhasePoint:
    """A point of the closed first quadrant."""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"phase point ({self.x}, {self.y}) is not finite")
        if self.x < 0 or self.y < 0:
            raise DomainError(f"phase point ({self.x}, {self.y}) lies outside x, y ≥ 0")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class CriticalPoint:
    """A finite equilibrium with its linearisation."""
    location: PhasePoint
    jacobian: np.ndarray = field(repr=False)
    eigenvalues: Tuple[complex, complex]
    poincare_index: int
    kind: PointKind


@dataclass(frozen=True)
class InfinityPoint:
    """
    A critical point at infinity.

    For the x-axis directions the eigenvalues live in the chart z = 1/x,
    u = y/x. The y-axis direction has no slope coordinate there and is
    reported with rotated_chart=True; its eigenvalues come from the chart
    z = 1/y, v = x/y.
    """
    u: float
    lambda_z: float
    lambda_u: float
    kind: InfinityKind
    rotated_chart: bool = False


@dataclass(frozen=True)
class AsymptoticSlopes:
    """Real limits gamma_- <= gamma_+ < 0 of y'/x' at the interior sink."""
    gamma_minus: float
    gamma_plus: float


@dataclass(frozen=True)
class ComplexCase:
    """The slope equation has complex roots; the orbit spirals into the sink."""
    real_part: float
    imag_part: float


def vector_field(p: PhasePoint, params: Params) -> Tuple[float, float]:
    """
    Evaluate the autonomous Lotka-Volterra field.

    Args:
        p: Phase point
        params: Problem parameters

    Returns:
        (dx/dt, dy/dt)
    """
    return general_vector_field(p, params.n + params.sigma, params)


def general_vector_field(p: PhasePoint, rho: float, params: Params) -> Tuple[float, float]:
    """
    Field of the weighted system with rho(t) = n + r h'(r)/h(r) frozen at a value.

    For power weights h(r) = lambda r^sigma / c_{n,k}, rho = n + sigma.
    """
    n, k, q = params.n, params.k, params.q
    dx = p.x * (rho - p.x - q * p.y)
    dy = p.y * (-(n - 2 * k) / k + p.x / k + p.y)
    return dx, dy


def lv_rhs(params: Params) -> Callable[[float, np.ndarray], np.ndarray]:
    """
    Right-hand side in the (t, z) signature used by scipy's integrators.

    Args:
        params: Problem parameters

    Returns:
        Function f(t, z) with z = (x, y), accepting column-stacked arrays
    """
    n, k, q = params.n, params.k, params.q
    rho = n + params.sigma
    beta = (n - 2 * k) / k

    def rhs(t: float, z: np.ndarray) -> np.ndarray:
        x, y = z[0], z[1]
        return np.array([x * (rho - x - q * y), y * (-beta + x / k + y)])

    return rhs


def jacobian(p: PhasePoint, params: Params) -> np.ndarray:
    """
    Jacobian matrix of the field at an arbitrary point.

    Args:
        p: Phase point
        params: Problem parameters

    Returns:
        2x2 array [[dP/dx, dP/dy], [dQ/dx, dQ/dy]]
    """
    n, k, q = params.n, params.k, params.q
    x, y = p.x, p.y
    return np.array([
        [n + params.sigma - 2 * x - q * y, -q * x],
        [y / k, -(n - 2 * k) / k + x / k + 2 * y],
    ])


def _spectrum(trace: float, det: float) -> Tuple[complex, complex]:
    root = cmath.sqrt(trace * trace - 4 * det)
    return (trace + root) / 2, (trace - root) / 2


def _kind(trace: float, det: float, center: bool = False) -> PointKind:
    if det < 0:
        return PointKind.SADDLE
    if center:
        return PointKind.CENTER
    spiral = trace * trace - 4 * det < 0
    if trace < 0:
        return PointKind.SPIRAL_SINK if spiral else PointKind.NODE_SINK
    if trace > 0:
        return PointKind.SPIRAL_SOURCE if spiral else PointKind.NODE_SOURCE
    return PointKind.CENTER


def poincare_index(p: PhasePoint, params: Params) -> int:
    """
    Poincare index of a nondegenerate critical point.

    Returns:
        -1 when Lambda(x0, y0) = det J < 0, +1 when it is positive, 0 if degenerate
    """
    det = float(np.linalg.det(jacobian(p, params)))
    if det < 0:
        return -1
    if det > 0:
        return 1
    return 0


def _critical_point(p: PhasePoint, params: Params) -> CriticalPoint:
    jac = jacobian(p, params)
    trace = float(jac[0, 0] + jac[1, 1])
    det = float(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0])
    return CriticalPoint(
        location=p,
        jacobian=jac,
        eigenvalues=_spectrum(trace, det),
        poincare_index=-1 if det < 0 else (1 if det > 0 else 0),
        kind=_kind(trace, det),
    )


def interior_jacobian(params: Params) -> CriticalPoint:
    """
    Linearisation at the interior point (x^, y^) from the closed forms.

    trace = (2k + sigma - a_sigma)/(q - k), det = (2k + sigma) a_sigma / (k (q - k)).

    Raises:
        DomainError: when the interior point is not in the open first quadrant
    """
    point = interior_point(params)
    if point is None:
        raise DomainError(
            f"interior critical point requires q > (n+σ)k/(n−2k) = "
            f"{existence_threshold(params):.6g}"
        )
    x_hat, y_hat = point
    k, q = params.k, params.q
    b = 2 * k + params.sigma
    a = a_sigma(params)
    trace = (b - a) / (q - k)
    det = b * a / (k * (q - k))

    jac = np.array([
        [-x_hat, -q * x_hat],
        [y_hat / k, y_hat],
    ])
    regime = classify_regime(params)
    if regime == Regime.CENTER:
        trace = 0.0
        kind = PointKind.CENTER
    elif regime == Regime.SPIRAL:
        kind = PointKind.SPIRAL_SINK
    elif regime == Regime.STABLE_NODE:
        kind = PointKind.NODE_SINK
    else:
        kind = _kind(trace, det)

    return CriticalPoint(
        location=PhasePoint(x_hat, y_hat),
        jacobian=jac,
        eigenvalues=_spectrum(trace, det),
        poincare_index=1,
        kind=kind,
    )


def finite_critical_points(params: Params) -> List[CriticalPoint]:
    """
    Equilibria in the closed first quadrant.

    The three boundary points (0, 0), (n + sigma, 0), (0, (n - 2k)/k) are always
    present; the interior point only when q > (n + sigma)k/(n - 2k).
    """
    n, k = params.n, params.k
    points = [
        _critical_point(PhasePoint(0.0, 0.0), params),
        _critical_point(PhasePoint(n + params.sigma, 0.0), params),
        _critical_point(PhasePoint(0.0, (n - 2 * k) / k), params),
    ]
    if interior_point(params) is not None:
        points.append(interior_jacobian(params))
    logger.debug(f"Finite critical points for {params}: {[c.location for c in points]}")
    return points


def infinity_points(params: Params) -> List[InfinityPoint]:
    """
    Critical points at infinity.

    In the chart z = 1/x, u = y/x they solve (k+1)u/k + (q+1)u^2 = 0 with
    lambda_z = 1 + q u and lambda_u = (k+1)/k + 2 q u. The direction of the
    y-axis comes from the rotated chart z = 1/y, v = x/y, where the
    linearisation at the origin is diag(-1, -(q+1)).
    """
    k, q = params.k, params.q
    points = []
    for u in (0.0, -(k + 1) / (k * (q + 1))):
        lambda_z = 1 + q * u
        lambda_u = (k + 1) / k + 2 * q * u
        kind = InfinityKind.NODE if lambda_z * lambda_u > 0 else InfinityKind.SADDLE
        points.append(InfinityPoint(u=u, lambda_z=lambda_z, lambda_u=lambda_u, kind=kind))

    points.append(InfinityPoint(
        u=math.inf,
        lambda_z=-1.0,
        lambda_u=-(q + 1),
        kind=InfinityKind.NODE,
        rotated_chart=True,
    ))
    return points


def launch_slope(params: Params) -> float:
    """
    Slope gamma_s = -(n - 2k) q* / (q k (n + sigma)) of the orbit leaving (n + sigma, 0).
    """
    n, k = params.n, params.k
    return -(n - 2 * k) * q_star(params) / (params.q * k * (n + params.sigma))


def unstable_direction(params: Params) -> np.ndarray:
    """
    Unit eigenvector of J(n + sigma, 0) for the eigenvalue (2k + sigma)/k.

    Returns:
        Array (dx, dy) with dx < 0 < dy, slope launch_slope(params)
    """
    gamma = launch_slope(params)
    direction = np.array([-1.0, -gamma])
    return direction / np.linalg.norm(direction)


def asymptotic_slopes(params: Params) -> Union[AsymptoticSlopes, ComplexCase]:
    """
    Limits of y'/x' as the orbit enters the interior sink.

    Roots of gamma^2 + ((2k+sigma+a)/(q a)) gamma + (2k+sigma)/(q k a) = 0.

    Returns:
        AsymptoticSlopes when q >= q_JL, ComplexCase otherwise

    Raises:
        DomainError: when the interior point does not exist
    """
    if interior_point(params) is None:
        raise DomainError("asymptotic slopes require q > (n+σ)k/(n−2k)")
    k, q = params.k, params.q
    b = 2 * k + params.sigma
    a = a_sigma(params)
    lin = (b + a) / (q * a)
    const = b / (q * k * a)
    disc = lin * lin - 4 * const

    if classify_regime(params) != Regime.STABLE_NODE:
        return ComplexCase(real_part=-lin / 2, imag_part=math.sqrt(max(-disc, 0.0)) / 2)

    root = math.sqrt(max(disc, 0.0))
    return AsymptoticSlopes(gamma_minus=(-lin - root) / 2, gamma_plus=(-lin + root) / 2)


def invariant_line_residual(p: PhasePoint, params: Params) -> float:
    """
    Value of ((n-2k)/k) x + (n+sigma) y - ((n-2k)/k)(n+sigma).

    The zero set is invariant when q = q*.
    """
    n, k = params.n, params.k
    beta = (n - 2 * k) / k
    rho = n + params.sigma
    return beta * p.x + rho * p.y - beta * rho


def oscillation_period(params: Params) -> Optional[float]:
    """
    Period 2 pi / |Im lambda| of the linear oscillation at the interior point.

    Returns:
        None when the interior point has real eigenvalues or does not exist
    """
    if interior_point(params) is None:
        return None
    eig = interior_jacobian(params).eigenvalues[0]
    if abs(eig.imag) == 0.0:
        return None
    return 2 * math.pi / abs(eig.imag)
