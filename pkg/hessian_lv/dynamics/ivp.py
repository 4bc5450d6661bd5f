"""
Direct solver for the normalised singular initial value problem

    (s^{n-k} (v')^k)' = lambda_bar s^{n-1+sigma} (-v)^q,   v(0) = -1, v'(0) = 0,

and the change of variables linking radial profiles with the phase plane.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp as integrate_ivp

from hessian_lv.analysis.exponents import (Params, is_center, lambda_bar,
                                           lambda_tilde, q_star)
from hessian_lv.analysis.phase import PhasePoint
from hessian_lv.config import GRID_POINTS
from hessian_lv.dynamics.integrator import IntegratorConfig
from hessian_lv.dynamics.series import series_profile
from hessian_lv.errors import (DegenerateInput, DomainError, NonConvergence,
                               RegimeError)
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)

Weight = Union[Callable[[np.ndarray], np.ndarray], float]


@dataclass(frozen=True)
class RadialProfile:
    """
    Samples (s, v, v') of a solution of the normalised problem.

    A fresh profile has v(0) = -1; rescaled profiles keep v'(0) = 0 and
    v < 0 but start at v(0) = -a^delta.
    """
    s: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    dv: np.ndarray = field(repr=False)
    lambda_bar: float

    @property
    def samples(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.s.tolist(), self.v.tolist(), self.dv.tolist()))


def flux_of(profile: RadialProfile, params: Params) -> np.ndarray:
    """Flux F(s) = s^{n-k} (v')^k at every sample."""
    return profile.s ** (params.n - params.k) * profile.dv ** params.k


def handoff_point(params: Params, abs_tol: float) -> float:
    """Radius s0 = min(1e-3, abs_tol^{k/(2(2k+sigma))}) where the series hands over."""
    k = params.k
    return min(1e-3, abs_tol ** (k / (2 * (2 * k + params.sigma))))


def solve_ivp(params: Params, s_max: float, cfg: Optional[IntegratorConfig] = None,
              num: Optional[int] = None, s_eval: Optional[np.ndarray] = None) -> RadialProfile:
    """
    Solve the normalised problem on [0, s_max].

    The two-term series v = -1 + b s^p + c s^{2p} covers [0, s0]; beyond s0 the pair
    (v, F) is integrated with v' = (F / s^{n-k})^{1/k}.

    Args:
        params: Problem parameters, q >= q*
        s_max: Right end of the computed range
        cfg: Tolerances, defaults from hessian_lv.config
        num: Number of uniform samples on [0, s_max] (default GRID_POINTS)
        s_eval: Explicit nondecreasing sample radii in [0, s_max]

    Returns:
        RadialProfile

    Raises:
        RegimeError: if q < q*
        NonConvergence: on solver failure or a negative flux
    """
    if params.q < q_star(params) and not is_center(params):
        raise RegimeError(
            f"q = {params.q:g} < q* = {q_star(params):g}: no global solution to integrate"
        )
    if not (math.isfinite(s_max) and s_max > 0):
        raise DomainError("s_max must be positive and finite")

    cfg = cfg or IntegratorConfig()
    n, k, sigma, q = params.n, params.k, params.sigma, params.q
    lam_bar = lambda_bar(params)
    if s_eval is None:
        s_eval = np.linspace(0.0, s_max, num or GRID_POINTS)
    s_eval = np.asarray(s_eval, dtype=float)
    if s_eval.min() < 0 or s_eval.max() > s_max:
        raise DomainError("s_eval must lie in [0, s_max]")

    s0 = min(handoff_point(params, cfg.abs_tol), s_max)
    v = np.empty_like(s_eval)
    dv = np.empty_like(s_eval)

    near = s_eval <= s0
    v[near], dv[near] = series_profile(s_eval[near], params)

    far = ~near
    if np.any(far):
        def rhs(s, z):
            flux = z[1]
            if flux < 0:
                raise NonConvergence(f"negative flux {flux:g} at s = {s:g}")
            return [
                (flux / s ** (n - k)) ** (1.0 / k),
                lam_bar * s ** (n - 1 + sigma) * max(-z[0], 0.0) ** q,
            ]

        v0, dv0 = series_profile(s0, params)
        start = [float(v0), s0 ** (n - k) * float(dv0) ** k]
        # F starts near s0^{n+sigma}; its absolute tolerance follows that scale
        atol = [cfg.abs_tol, cfg.abs_tol * start[1]]
        sol = integrate_ivp(rhs, (s0, s_max), start, method="DOP853",
                            rtol=cfg.rel_tol, atol=atol, dense_output=True)
        if not sol.success:
            raise NonConvergence(f"initial value problem failed: {sol.message}")

        z = sol.sol(s_eval[far])
        if np.any(z[1] < 0):
            raise NonConvergence("negative flux in the dense solution")
        v[far] = z[0]
        dv[far] = (z[1] / s_eval[far] ** (n - k)) ** (1.0 / k)
        logger.info(f"IVP solved on [{s0:.3g}, {s_max:g}] with {sol.t.size} steps")

    return RadialProfile(s=s_eval, v=v, dv=dv, lambda_bar=lam_bar)


def transform_to_phase(s, w, dw, weight: Weight, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """
    Change of variables x = s^k h(s) (-w)^q / (w')^k, y = s w' / (-w).

    Args:
        s: Radii, s > 0
        w: Profile values, w < 0
        dw: Derivative values, w' > 0
        weight: h(s) as a callable or the constant of a pure power h = weight s^sigma
        params: Problem parameters

    Returns:
        Arrays (x, y)

    Raises:
        DegenerateInput: if w' vanishes
    """
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    dw = np.asarray(dw, dtype=float)
    if np.any(dw == 0):
        raise DegenerateInput("w' = 0 at a requested radius; the phase image is undefined")
    h = weight(s) if callable(weight) else weight * s ** params.sigma
    x = s ** params.k * h * (-w) ** params.q / dw ** params.k
    y = s * dw / (-w)
    return x, y


def phase_to_profile(t, x, y, weight: Weight, params: Params) -> np.ndarray:
    """
    Inverse change of variables w = -[r^{2k} h(r)]^{-1/(q-k)} (x y^k)^{1/(q-k)}, r = e^t.
    """
    r = np.exp(np.asarray(t, dtype=float))
    h = weight(r) if callable(weight) else weight * r ** params.sigma
    m = params.q - params.k
    product = np.asarray(x, dtype=float) * np.asarray(y, dtype=float) ** params.k
    return -(r ** (2 * params.k) * h) ** (-1.0 / m) * product ** (1.0 / m)


def to_phase(profile: RadialProfile, params: Params) -> List[Tuple[float, PhasePoint]]:
    """
    Phase image (t = ln s, x, y) of the samples with s > 0.

    Raises:
        DegenerateInput: if v' = 0 at some s > 0
    """
    positive = profile.s > 0
    s = profile.s[positive]
    x, y = transform_to_phase(s, profile.v[positive], profile.dv[positive],
                              profile.lambda_bar, params)
    return [(float(math.log(si)), PhasePoint(float(xi), float(yi)))
            for si, xi, yi in zip(s, x, y)]


def ivp_residual(profile: RadialProfile, params: Params) -> float:
    """
    Max over interior samples of |F'(s) - lambda_bar s^{n-1+sigma} (-v)^q|.

    F' is taken by second-order centred differences of the flux.
    """
    if profile.s.size < 3:
        raise DomainError("ivp_residual needs at least 3 samples")
    flux = flux_of(profile, params)
    d_flux = np.gradient(flux, profile.s, edge_order=2)
    source = profile.lambda_bar * profile.s ** (params.n - 1 + params.sigma) \
        * np.maximum(-profile.v, 0.0) ** params.q
    return float(np.max(np.abs(d_flux - source)[1:-1]))


def rescale_profile(profile: RadialProfile, a: float, params: Params) -> RadialProfile:
    """
    Scaled profile v_a(s) = a^delta v(a s), delta = (2k + sigma)/(q - k).

    Args:
        profile: Source profile
        a: Scale, a > 0
        params: Problem parameters

    Returns:
        Profile sampled at s / a
    """
    if not a > 0:
        raise DomainError("scale a must be positive")
    delta = (2 * params.k + params.sigma) / (params.q - params.k)
    return RadialProfile(
        s=profile.s / a,
        v=a ** delta * profile.v,
        dv=a ** (delta + 1) * profile.dv,
        lambda_bar=profile.lambda_bar,
    )


def rescaling_factor(lam: float, A: float, params: Params) -> float:
    """
    Ratio s/r = (lambda / lambda~)^{1/(2k+sigma)} (1 - A)^{(q-k)/(2k+sigma)}.

    Args:
        lam: Parameter lambda > 0
        A: Value u(0) < 0
        params: Problem parameters
    """
    if not lam > 0:
        raise DomainError("λ ≤ 0")
    if not A < 0:
        raise DomainError("u(0) must be negative")
    b = 2 * params.k + params.sigma
    return (lam / lambda_tilde(params)) ** (1.0 / b) * (1.0 - A) ** ((params.q - params.k) / b)
