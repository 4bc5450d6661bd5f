"""
Closed-form solutions: the singular solution, the explicit orbit and the Bliss
profiles of the critical exponent q = q*, and the roots d that select them.
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from hessian_lv.analysis.exponents import (Params, binomial, is_center,
                                           lambda_tilde, mu_star, q_star,
                                           tau_sigma)
from hessian_lv.errors import DomainError, NonConvergence, RegimeError
from hessian_lv.solutions.branch import RadialSolution, SolutionSource
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class RadialFunction:
    """A radial profile u(r) known in closed form together with u'(r)."""
    lam: float
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    source: SolutionSource
    u0: float

    def __call__(self, r):
        return self.value(np.asarray(r, dtype=float))

    def sample(self, r) -> RadialSolution:
        """Sample on a grid, carrying exact derivative values."""
        r = np.asarray(r, dtype=float)
        return RadialSolution(r=r, u=self.value(r), lam=self.lam, u0=self.u0,
                              source=self.source, du=self.derivative(r))


@dataclass(frozen=True)
class BlissFunction:
    """
    Entire solution w_c(r) = -lambda^{-beta} (c K)^beta / (c + r^p)^gamma of the
    critical equation, p = (2k+sigma)/k, gamma = (n-2k)/(2k+sigma).
    """
    c: float
    lam: float
    scale: float
    p: float
    gamma: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return -self.scale * (self.c + r ** self.p) ** (-self.gamma)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return (self.scale * self.gamma * self.p * r ** (self.p - 1)
                * (self.c + r ** self.p) ** (-self.gamma - 1))

    def as_solution(self, r) -> RadialSolution:
        """Samples of u = 1 + w_c, so that 1 - u = -w_c."""
        r = np.asarray(r, dtype=float)
        return RadialSolution(r=r, u=1.0 + self(r), lam=self.lam,
                              u0=float(1.0 + self(0.0)),
                              source=SolutionSource.CLOSED_FORM_EXTREMAL,
                              du=self.derivative(r))


def _require_critical(params: Params) -> None:
    if not is_center(params):
        raise DomainError(
            f"closed forms need q = q* = {q_star(params):.12g}, got q = {params.q:g}"
        )


def bliss_constant(params: Params) -> float:
    """K = binom(n, k) ((n + sigma)/n) ((n - 2k)/k)^k."""
    n, k = params.n, params.k
    return binomial(n, k) * (n + params.sigma) / n * ((n - 2 * k) / k) ** k


def singular_solution(params: Params) -> RadialFunction:
    """
    Singular solution u = 1 + U, U(r) = -r^{-(2k+sigma)/(q-k)}, for lambda = lambda~.

    Raises:
        RegimeError: if q < q*
    """
    if params.q < q_star(params) and not is_center(params):
        raise RegimeError(f"singular solution is used for q ≥ q* = {q_star(params):g}")
    tau = tau_sigma(params)

    def value(r):
        return 1.0 - r ** (-tau)

    def derivative(r):
        return tau * r ** (-tau - 1)

    return RadialFunction(lam=lambda_tilde(params), value=value, derivative=derivative,
                          source=SolutionSource.SINGULAR, u0=-math.inf)


def critical_orbit(c: float, params: Params) -> Callable[[float], Tuple[float, float]]:
    """
    Explicit orbit of the critical system on the invariant line.

    x(t) = (n + sigma) c / (c + E), y(t) = ((n - 2k)/k) E / (c + E),
    E = exp(((2k + sigma)/k) t).

    Args:
        c: Positive shift constant; x(0) = (n + sigma)/2 when c = 1
        params: Parameters with q = q*

    Returns:
        Vectorised function t -> (x, y)
    """
    _require_critical(params)
    if not c > 0:
        raise DomainError("c must be positive")
    n, k = params.n, params.k
    rho = n + params.sigma
    beta = (n - 2 * k) / k
    p = (2 * k + params.sigma) / k
    log_c = math.log(c)

    def orbit(t):
        phase = p * np.asarray(t, dtype=float) - log_c
        return rho * expit(-phase), beta * expit(phase)

    return orbit


def d_roots(lam: float, params: Params) -> List[float]:
    """
    Positive roots of lambda (d + 1)^{k+1} - K d^k.

    Returns:
        [k] when lambda = mu*, [d-, d+] with d- < k < d+ below it, [] above it
    """
    _require_critical(params)
    if not lam > 0:
        raise DomainError("λ ≤ 0")
    k = params.k
    big_k = bliss_constant(params)

    def poly(d: float) -> float:
        return lam * (d + 1) ** (k + 1) - big_k * d ** k

    scale = lam * (k + 1) ** (k + 1) + big_k * k ** k
    at_k = poly(k)
    if abs(at_k) < 1e-10 * scale:
        return [float(k)]
    if at_k > 0:
        return []

    lower = brentq(poly, 0.0, float(k), xtol=1e-15, rtol=4 * np.finfo(float).eps)
    hi = 2.0 * k
    for _ in range(200):
        if poly(hi) > 0:
            break
        hi *= 2
    else:
        raise NonConvergence("no bracket for the upper root d+")
    upper = brentq(poly, float(k), hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    logger.debug(f"d roots for λ = {lam:g}: {lower:.15g}, {upper:.15g}")
    return [float(lower), float(upper)]


def bliss_function(c: float, lam: float, params: Params) -> BlissFunction:
    """
    Bliss profile w_c solving the critical equation on every annulus.

    Args:
        c: Positive shape constant
        lam: Parameter lambda > 0
        params: Parameters with q = q*
    """
    _require_critical(params)
    if not (c > 0 and lam > 0):
        raise DomainError("c and λ must be positive")
    n, k, sigma = params.n, params.k, params.sigma
    beta = (n - 2 * k) / ((2 * k + sigma) * (k + 1))
    return BlissFunction(
        c=c,
        lam=lam,
        scale=(c * bliss_constant(params) / lam) ** beta,
        p=(2 * k + sigma) / k,
        gamma=(n - 2 * k) / (2 * k + sigma),
    )


def _boundary_solution(d: float, lam: float, source: SolutionSource,
                       params: Params) -> RadialFunction:
    """u(r) = 1 - ((c + 1)/(c + r^p))^gamma with c = 1/d, so that u(1) = 0."""
    n, k, sigma = params.n, params.k, params.sigma
    p = (2 * k + sigma) / k
    gamma = (n - 2 * k) / (2 * k + sigma)
    c = 1.0 / d

    def value(r):
        return 1.0 - ((c + 1.0) / (c + r ** p)) ** gamma

    def derivative(r):
        return gamma * p * (c + 1.0) ** gamma * r ** (p - 1) * (c + r ** p) ** (-gamma - 1)

    return RadialFunction(lam=lam, value=value, derivative=derivative,
                          source=source, u0=1.0 - (1.0 + d) ** gamma)


def critical_solutions(lam: float, params: Params) -> List[RadialFunction]:
    """
    All radial solutions of the critical problem for 0 < lambda <= mu*.

    Returns:
        [minimal, large] for lambda < mu*, [u*] at lambda = mu*

    Raises:
        DomainError: for lambda > mu*
    """
    _require_critical(params)
    roots = d_roots(lam, params)
    if not roots:
        raise DomainError(f"λ = {lam:g} > μ* = {mu_star(params):.12g}: no radial solution")
    if len(roots) == 1:
        return [_boundary_solution(roots[0], lam, SolutionSource.CLOSED_FORM_EXTREMAL, params)]
    return [
        _boundary_solution(roots[0], lam, SolutionSource.CLOSED_FORM_MINUS, params),
        _boundary_solution(roots[1], lam, SolutionSource.CLOSED_FORM_PLUS, params),
    ]


def extremal_solution(params: Params) -> RadialFunction:
    """u*(r) = 1 - ((1 + k)/(1 + k r^{(2k+sigma)/k}))^{(n-2k)/(2k+sigma)} at lambda = mu*."""
    _require_critical(params)
    return _boundary_solution(float(params.k), mu_star(params),
                              SolutionSource.CLOSED_FORM_EXTREMAL, params)


def normalized_bliss(params: Params) -> BlissFunction:
    """Bliss profile with w(0) = -1 for lambda = lambda~, the solution of the normalised problem."""
    _require_critical(params)
    lam = lambda_tilde(params)
    c = (bliss_constant(params) / lam) ** (1.0 / params.k)
    return bliss_function(c, lam, params)
