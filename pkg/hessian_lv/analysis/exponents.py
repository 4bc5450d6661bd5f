"""
Closed-form constants and critical exponents of the weighted k-Hessian problem.

Every quantity here depends only on (n, k, sigma, q): the interior equilibrium
of the Lotka-Volterra system, the exponents q* and q_JL, the singular-solution
parameter lambda~ and the extremal parameter mu* of the critical problem.
"""
import math
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import newton
from scipy.special import comb

from hessian_lv.config import CENTER_TOL
from hessian_lv.errors import DomainError
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


class Regime(str, Enum):
    """Stability regime of the interior critical point."""
    CENTER = "Center"
    SPIRAL = "Spiral"
    STABLE_NODE = "StableNode"
    UNSTABLE_EXCLUDED = "UnstableExcluded"


def _violation(n: float, k: float, sigma: float, q: float,
               lam: Optional[float]) -> Optional[str]:
    """
    Return a message naming the first violated admissibility inequality.

    Args:
        n: Dimension
        k: Hessian order
        sigma: Weight exponent
        q: Source exponent
        lam: Optional parameter lambda

    Returns:
        None when all inequalities hold
    """
    for name, value in (("n", n), ("k", k), ("sigma", sigma), ("q", q)):
        if not math.isfinite(value):
            return f"{name} must be finite"
    if n != int(n) or k != int(k):
        return "n and k must be integers"
    if k < 1:
        return "k < 1"
    if n <= 2 * k:
        return "n ≤ 2k"
    if q <= k:
        return "q ≤ k"
    if sigma < 0:
        return "σ < 0"
    if lam is not None and not (math.isfinite(lam) and lam > 0):
        return "λ ≤ 0"
    return None


class Params(BaseModel):
    """Problem parameters (n, k, sigma, q, lambda) of the radial problem."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n: int
    k: int
    sigma: float = 0.0
    q: float
    lam: Optional[float] = Field(default=None, alias="lambda")

    @model_validator(mode="after")
    def _check_admissible(self) -> "Params":
        message = _violation(self.n, self.k, self.sigma, self.q, self.lam)
        if message:
            raise ValueError(message)
        return self

    def with_q(self, q: float) -> "Params":
        """Return a copy with another source exponent."""
        return validate_params(self.n, self.k, self.sigma, q, self.lam)

    def with_lambda(self, lam: Optional[float]) -> "Params":
        """Return a copy with another parameter lambda."""
        return validate_params(self.n, self.k, self.sigma, self.q, lam)


class ExponentReport(BaseModel):
    """All derived constants and the regime of the interior critical point."""

    model_config = ConfigDict(frozen=True)

    c_nk: float
    tau_sigma: float
    a_sigma: float
    q_star: float
    q_jl: float
    lambda_tilde: float
    mu_star: float
    trace_j: float
    det_j: float
    discriminant: float
    regime: Regime


def validate_params(n: float, k: float, sigma: float, q: float,
                    lam: Optional[float] = None) -> Params:
    """
    Validate raw numeric inputs and build Params.

    Args:
        n: Dimension (integer, n > 2k)
        k: Hessian order (integer, k >= 1)
        sigma: Weight exponent (sigma >= 0)
        q: Source exponent (q > k)
        lam: Optional parameter (lambda > 0)

    Returns:
        Validated Params

    Raises:
        DomainError: naming the violated inequality
    """
    message = _violation(n, k, sigma, q, lam)
    if message:
        raise DomainError(message)
    return Params(n=int(n), k=int(k), sigma=float(sigma), q=float(q),
                  lam=None if lam is None else float(lam))


def binomial(n: int, k: int) -> float:
    """Binomial coefficient in floating point."""
    return float(comb(n, k, exact=False))


def c_nk(params: Params) -> float:
    """c_{n,k} = binom(n, k) / n."""
    return binomial(params.n, params.k) / params.n


def tau_sigma(params: Params) -> float:
    """tau_sigma = (2k + sigma) / (q - k), also the ordinate of the interior point."""
    return (2 * params.k + params.sigma) / (params.q - params.k)


def a_sigma(params: Params) -> float:
    """a_sigma = q(n - 2k) - (n + sigma)k."""
    n, k = params.n, params.k
    return params.q * (n - 2 * k) - (n + params.sigma) * k


def existence_threshold(params: Params) -> float:
    """Exponent (n + sigma)k / (n - 2k) above which the interior point exists."""
    return (params.n + params.sigma) * params.k / (params.n - 2 * params.k)


def jl_dimension_threshold(params: Params) -> float:
    """Dimension 2k + 8 + 4 sigma / k above which q_JL is finite."""
    k = params.k
    return 2 * k + 8 + 4 * params.sigma / k


def interior_point(params: Params) -> Optional[Tuple[float, float]]:
    """
    Interior critical point (x^, y^) of the Lotka-Volterra system.

    Returns:
        The point, or None when it is not in the open first quadrant
    """
    if params.q <= existence_threshold(params):
        return None
    return a_sigma(params) / (params.q - params.k), tau_sigma(params)


def q_star(params: Params) -> float:
    """
    Tso / Hardy-Sobolev type critical exponent.

    q*(k, sigma) = ((n + 2)k + sigma(k + 1)) / (n - 2k)
    """
    n, k, sigma = params.n, params.k, params.sigma
    return ((n + 2) * k + sigma * (k + 1)) / (n - 2 * k)


def f_ksigma(q: float, params: Params) -> float:
    """
    Function whose level n - 2k defines q_JL.

    Args:
        q: Exponent, q > k
        params: Supplies k and sigma

    Returns:
        f_{k,sigma}(q)
    """
    k, sigma = params.k, params.sigma
    a = 2 * k + sigma
    m = q - k
    return (2 * q * a / (k * m)
            + (2 * a / k) * math.sqrt(q / m)
            + a * (k - 1) / m)


def _f_ksigma_prime(q: float, params: Params) -> float:
    k, sigma = params.k, params.sigma
    a = 2 * k + sigma
    m = q - k
    return -(2 * a + a / math.sqrt(q / m) + a * (k - 1)) / (m * m)


def q_jl(params: Params) -> float:
    """
    Joseph-Lundgren type exponent q_JL(k, sigma).

    The closed-form quotient is polished by Newton iterations on
    f_{k,sigma}(q) = n - 2k. Returns +inf when n <= 2k + 8 + 4 sigma / k.
    """
    n, k, sigma = params.n, params.k, params.sigma
    if n <= jl_dimension_threshold(params):
        return math.inf

    root = math.sqrt(k * (2 * k + sigma) * ((k + 1) * n - k * (2 - sigma)))
    numerator = k * (k + 1) * n - k * k * (2 - sigma) + 2 * k + sigma - 2 * root
    denominator = k * (k + 1) * n - 2 * k * k * (k + 3) - 2 * k * sigma - 2 * root
    closed_form = k * numerator / denominator

    polished = newton(
        lambda q: f_ksigma(q, params) - (n - 2 * k),
        closed_form,
        fprime=lambda q: _f_ksigma_prime(q, params),
        tol=1e-14,
        maxiter=50,
        disp=False,
    )

    if not (math.isfinite(polished) and polished > k):
        return closed_form
    return float(polished)


def lambda_tilde(params: Params) -> float:
    """
    Parameter of the explicit singular solution.

    lambda~ = c_{n,k} tau^k (n - 2k - k tau); positive iff tau < (n - 2k)/k.
    """
    n, k = params.n, params.k
    tau = tau_sigma(params)
    return c_nk(params) * tau ** k * (n - 2 * k - k * tau)


def lambda_bar(params: Params) -> float:
    """lambda~ / c_{n,k}, the coefficient of the normalised initial value problem."""
    return lambda_tilde(params) / c_nk(params)


def mu_star(params: Params) -> float:
    """
    Extremal parameter of the critical-exponent problem.

    mu* = binom(n, k) ((n + sigma)/n) (n - 2k)^k / (k + 1)^(k + 1)
    """
    n, k, sigma = params.n, params.k, params.sigma
    return binomial(n, k) * (n + sigma) / n * (n - 2 * k) ** k / (k + 1) ** (k + 1)


def discriminant(params: Params) -> float:
    """(tr J)^2 - 4 det J at the interior point, written through a_sigma."""
    k = params.k
    b = 2 * k + params.sigma
    a = a_sigma(params)
    m = params.q - params.k
    return ((b - a) ** 2 - 4 * (b * m / k) * a) / (m * m)


def is_center(params: Params) -> bool:
    """True when q equals q* up to the center tolerance."""
    return abs(params.q - q_star(params)) < CENTER_TOL * max(1.0, params.q)


def classify_regime(params: Params) -> Regime:
    """
    Classify the interior critical point.

    Returns:
        Center at q = q*, UnstableExcluded below it, Spiral on (q*, q_JL)
        and StableNode from q_JL on
    """
    if is_center(params):
        return Regime.CENTER
    if params.q < q_star(params):
        return Regime.UNSTABLE_EXCLUDED
    jl = q_jl(params)
    if math.isfinite(jl) and params.q >= jl - CENTER_TOL * max(1.0, params.q):
        return Regime.STABLE_NODE
    return Regime.SPIRAL


def exponent_report(params: Params) -> ExponentReport:
    """
    Collect every derived constant and the regime.

    Args:
        params: Validated parameters

    Returns:
        ExponentReport
    """
    k = params.k
    b = 2 * k + params.sigma
    a = a_sigma(params)
    m = params.q - k
    report = ExponentReport(
        c_nk=c_nk(params),
        tau_sigma=tau_sigma(params),
        a_sigma=a,
        q_star=q_star(params),
        q_jl=q_jl(params),
        lambda_tilde=lambda_tilde(params),
        mu_star=mu_star(params),
        trace_j=(b - a) / m,
        det_j=b * a / (k * m),
        discriminant=discriminant(params),
        regime=classify_regime(params),
    )
    logger.debug(f"Exponent report for {params}: {report}")
    return report
