"""
Residuals of sampled radial profiles against the k-Hessian equation

    c_{n,k} r^{1-n} (r^{n-k} (u')^k)' = lambda r^sigma (1 - u)^q

in expanded form and in the integrated (flux) form.
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import make_interp_spline

from hessian_lv.analysis.exponents import Params, c_nk
from hessian_lv.errors import DomainError
from hessian_lv.solutions.branch import RadialSolution
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


def _derivatives(solution: RadialSolution):
    """
    u' and u'' at the sample radii.

    u'' differentiates a quintic interpolating spline of u'; the spline runs
    in r when r = 0 is sampled and in ln r otherwise.
    """
    r = solution.r
    du = solution.du
    if du is None:
        du = make_interp_spline(r, solution.u, k=5).derivative()(r)

    if r[0] == 0.0:
        d2u = make_interp_spline(r, du, k=5).derivative()(r)
    else:
        log_r = np.log(r)
        d2u = make_interp_spline(log_r, du, k=5).derivative()(log_r) / r
    return du, d2u


def khessian_residual(solution: RadialSolution, params: Params) -> float:
    """
    Max interior residual of the radial k-Hessian equation.

    Uses c k r^{1-k} (u')^{k-1} (u'' + ((n-k)/k) u'/r) - lambda r^sigma (1 - u)^q.

    Args:
        solution: Sampled profile, at least 5 strictly increasing radii
        params: Problem parameters; lambda comes from the solution

    Returns:
        Maximum absolute residual over interior samples
    """
    r = np.asarray(solution.r, dtype=float)
    if r.size < 5:
        raise DomainError("khessian_residual needs at least 5 samples")
    if np.any(np.diff(r) <= 0):
        raise DomainError("radii must be strictly increasing")

    n, k = params.n, params.k
    du, d2u = _derivatives(solution)
    inner = slice(1, -1)
    ri, dui, d2ui = r[inner], du[inner], d2u[inner]

    operator = c_nk(params) * k * ri ** (1 - k) * dui ** (k - 1) \
        * (d2ui + (n - k) / k * dui / ri)
    source = solution.lam * ri ** params.sigma * (1.0 - solution.u[inner]) ** params.q
    residual = float(np.max(np.abs(operator - source)))
    logger.debug(f"k-Hessian residual of {solution.source.value} profile: {residual:.3e}")
    return residual


def integral_residual(solution: RadialSolution, params: Params) -> float:
    """
    Max |c r^{n-k} (u')^k - lambda * int_0^r s^{n-1+sigma} (1 - u)^q ds|.

    When the grid starts at r0 > 0 the flux at r0 is taken as the lower limit.
    Quadrature is trapezoidal on the sample grid.
    """
    r = np.asarray(solution.r, dtype=float)
    if r.size < 3:
        raise DomainError("integral_residual needs at least 3 samples")
    n, k = params.n, params.k
    c = c_nk(params)
    du = solution.du
    if du is None:
        du = make_interp_spline(r, solution.u, k=5).derivative()(r)

    flux = c * r ** (n - k) * du ** k
    integrand = r ** (n - 1 + params.sigma) * (1.0 - solution.u) ** params.q
    integral = flux[0] + solution.lam * cumulative_trapezoid(integrand, r, initial=0.0)
    return float(np.max(np.abs(flux - integral)))
