"""
Closed-form oracle suite behind the verify command.
"""
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.optimize import brentq

from hessian_lv.analysis.exponents import (Params, c_nk, interior_point,
                                           mu_star, q_star, validate_params)
from hessian_lv.analysis.phase import (PhasePoint, invariant_line_residual,
                                       lv_rhs)
from hessian_lv.dynamics.integrator import IntegratorConfig, integrate_orbit
from hessian_lv.dynamics.ivp import (RadialProfile, ivp_residual, solve_ivp,
                                     transform_to_phase)
from hessian_lv.solutions.closed_form import (bliss_constant, bliss_function,
                                              critical_orbit,
                                              critical_solutions, d_roots,
                                              extremal_solution,
                                              normalized_bliss,
                                              singular_solution)
from hessian_lv.solutions.residuals import khessian_residual
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """Outcome of one oracle."""
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)


class VerifyService:
    """
    Checks the numerical pipeline against the closed forms of the critical
    exponent q = q* and the singular solution.
    """

    def __init__(self, n: int, k: int, sigma: float = 0.0):
        """
        Initialize the suite for one (n, k, sigma).

        Args:
            n: Dimension
            k: Hessian order
            sigma: Weight exponent
        """
        base = validate_params(n, k, sigma, k + 1)
        self.critical = base.with_q(q_star(base))
        self.supercritical = self.critical.with_q(self.critical.q + 1.0)
        self.grid = np.linspace(0.0, 1.0, 1000)
        logger.info(f"Verify service initialized for n={n}, k={k}, σ={sigma}")

    def check_critical_orbit(self) -> OracleResult:
        """Explicit orbit against the vector field, c in {0.5, 1, 2}."""
        params = self.critical
        n, k = params.n, params.k
        rho, beta = n + params.sigma, (n - 2 * k) / k
        p = (2 * k + params.sigma) / k
        rhs = lv_rhs(params)
        t = np.linspace(-5.0, 5.0, 100)
        worst = 0.0
        for c in (0.5, 1.0, 2.0):
            x, y = critical_orbit(c, params)(t)
            e = y / beta
            dx = -rho * p * e * (1.0 - e)
            dy = beta * p * e * (1.0 - e)
            field = rhs(0.0, np.vstack([x, y]))
            worst = max(worst, float(np.max(np.abs(dx - field[0]))),
                        float(np.max(np.abs(dy - field[1]))))
        return OracleResult("critical_orbit_field", worst, 1e-12)

    def check_invariant_line(self) -> OracleResult:
        """Explicit orbit stays on the invariant line."""
        params = self.critical
        t = np.linspace(-5.0, 5.0, 100)
        worst = 0.0
        for c in (0.5, 1.0, 2.0):
            x, y = critical_orbit(c, params)(t)
            worst = max(worst, max(abs(invariant_line_residual(PhasePoint(xi, yi), params))
                                   for xi, yi in zip(x, y)))
        return OracleResult("invariant_line", worst, 1e-12)

    def check_integrated_critical_orbit(self) -> OracleResult:
        """Integrated orbit at q* matches the explicit orbit after time alignment."""
        params = self.critical
        orbit = integrate_orbit(params, IntegratorConfig())
        rho = params.n + params.sigma
        t_half = brentq(lambda t: orbit.evaluate(t)[0] - rho / 2,
                        orbit.t_start, orbit.t_end, xtol=1e-14)
        exact = critical_orbit(1.0, params)
        t = orbit.t[orbit.t > orbit.t_start + 1.0]
        xy = orbit.evaluate(t)
        x, y = exact(t - t_half)
        worst = float(max(np.max(np.abs(xy[0] - x)), np.max(np.abs(xy[1] - y))))
        return OracleResult("integrated_critical_orbit", worst, 1e-6)

    def check_d_roots(self) -> OracleResult:
        """Root trichotomy around mu*: {k}, two roots, none."""
        params = self.critical
        mu = mu_star(params)
        k = params.k
        big_k = bliss_constant(params)

        def poly(lam: float, d: float) -> float:
            return lam * (d + 1) ** (k + 1) - big_k * d ** k

        at_mu = d_roots(mu, params)
        below = d_roots(0.5 * mu, params)
        above = d_roots(2.0 * mu, params)
        if at_mu != [float(k)] or len(below) != 2 or above:
            return OracleResult("d_roots", float("inf"), 1e-10)
        residual = max(abs(poly(0.5 * mu, d)) for d in below)
        return OracleResult("d_roots", residual, 1e-10)

    def check_extremal_solution(self) -> OracleResult:
        """u* solves the equation at lambda = mu* with u*(1) = 0."""
        params = self.critical
        solution = extremal_solution(params).sample(self.grid)
        residual = max(khessian_residual(solution, params), abs(float(solution.u[-1])))
        return OracleResult("extremal_solution", residual, 1e-6)

    def check_critical_pair(self) -> OracleResult:
        """The two solutions at lambda = mu*/2 solve the problem and differ at r = 0."""
        params = self.critical
        pair = critical_solutions(0.5 * mu_star(params), params)
        if len(pair) != 2 or not pair[0].u0 > pair[1].u0:
            return OracleResult("critical_pair", float("inf"), 1e-6)
        residual = max(max(khessian_residual(s.sample(self.grid), params),
                           abs(float(s(1.0)))) for s in pair)
        return OracleResult("critical_pair", residual, 1e-6)

    def check_bliss_annulus(self) -> OracleResult:
        """w_c solves the critical equation on an annulus for c in {0.5, 1, 2}."""
        params = self.critical
        r = np.linspace(0.5, 2.0, 1000)
        lam = mu_star(params)
        residual = max(khessian_residual(bliss_function(c, lam, params).as_solution(r), params)
                       for c in (0.5, 1.0, 2.0))
        return OracleResult("bliss_annulus", residual, 1e-8)

    def check_singular_solution(self) -> OracleResult:
        """1 + U solves the equation at lambda~ and maps to the interior point."""
        params = self.supercritical
        r = np.geomspace(0.1, 1.0, 1000)
        singular = singular_solution(params)
        sample = singular.sample(r)
        source = singular.lam * r ** params.sigma * (1.0 - sample.u) ** params.q
        relative = khessian_residual(sample, params) / float(np.max(source))

        x, y = transform_to_phase(r, sample.u - 1.0, sample.du,
                                  singular.lam / c_nk(params), params)
        x_hat, y_hat = interior_point(params)
        drift = float(max(np.max(np.abs(x - x_hat)) / x_hat, np.max(np.abs(y - y_hat)) / y_hat))
        return OracleResult("singular_solution", max(relative, drift), 1e-8)

    def check_ivp_against_bliss(self) -> OracleResult:
        """The initial value solver reproduces the normalised Bliss profile."""
        params = self.critical
        bliss = normalized_bliss(params)
        s = np.linspace(0.0, 1.0, 10001)
        exact = RadialProfile(s=s, v=bliss(s), dv=bliss.derivative(s), lambda_bar=bliss.lam / c_nk(params))
        profile = solve_ivp(params, 1.0, s_eval=s)
        drift = float(np.max(np.abs(profile.v - exact.v)))
        return OracleResult("ivp_against_bliss", max(drift, ivp_residual(exact, params)), 1e-6)

    def run_all(self) -> List[OracleResult]:
        """
        Run every oracle.

        Returns:
            Results in a fixed order
        """
        checks: List[Callable[[], OracleResult]] = [
            self.check_critical_orbit,
            self.check_invariant_line,
            self.check_integrated_critical_orbit,
            self.check_d_roots,
            self.check_extremal_solution,
            self.check_critical_pair,
            self.check_bliss_annulus,
            self.check_singular_solution,
            self.check_ivp_against_bliss,
        ]
        results = []
        for check in checks:
            result = check()
            level = logger.info if result.passed else logger.warning
            level(f"{result.name}: residual {result.residual:.3e} (tolerance {result.tolerance:g})")
            results.append(result)
        return results

    @property
    def params(self) -> Params:
        return self.critical
