"""
Two-term expansion of the normalised profile at s = 0,

    v(s) = -1 + b s^p + c s^{2p} + O(s^{3p}),   p = (2k + sigma)/k,

shared by the direct solver and the saddle launch of the phase-plane orbit.
"""
from typing import Tuple

import numpy as np

from hessian_lv.analysis.exponents import Params, lambda_bar
from hessian_lv.analysis.phase import unstable_direction


def series_exponent(params: Params) -> float:
    return (2 * params.k + params.sigma) / params.k


def series_coefficients(params: Params) -> Tuple[float, float]:
    """
    Coefficients (b, c) of the expansion.

    b = (1/p) (lambda_bar / (n + sigma))^{1/k} balances the leading order of
    (s^{n-k} (v')^k)' = lambda_bar s^{n-1+sigma} (-v)^q, and
    c = -q (n + sigma) b^2 / (2k (n + sigma + p)) the next one.
    """
    k, q = params.k, params.q
    rho = params.n + params.sigma
    p = series_exponent(params)
    b = (lambda_bar(params) / rho) ** (1.0 / k) / p
    c = -q * rho * b * b / (2 * k * (rho + p))
    return b, c


def series_profile(s, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """v(s) and v'(s) from the two-term expansion, vectorised in s >= 0."""
    s = np.asarray(s, dtype=float)
    p = series_exponent(params)
    b, c = series_coefficients(params)
    sp = s ** p
    v = -1.0 + b * sp + c * sp * sp
    with np.errstate(divide="ignore", invalid="ignore"):
        dv = np.where(s > 0, p * sp / np.where(s > 0, s, 1.0) * (b + 2 * c * sp), 0.0)
    return v, dv


def series_phase_point(s: float, params: Params) -> Tuple[float, float]:
    """
    Phase-plane image (x, y) of the expansion at radius s > 0.

    x = lambda_bar s^{k+sigma} (-v)^q / (v')^k and y = s v'/(-v).
    """
    k = params.k
    v, dv = series_profile(s, params)
    v, dv = float(v), float(dv)
    x = lambda_bar(params) * s ** (k + params.sigma) * (-v) ** params.q / dv ** k
    y = s * dv / (-v)
    return x, y


def launch_radius(offset: float, params: Params) -> float:
    """
    Radius whose phase image is (n + sigma, 0) + offset * unstable_direction to first order.

    With w = b s^p the image has y = p w + O(w^2), so w matches the y
    component of the eigenvector step.
    """
    p = series_exponent(params)
    b, _ = series_coefficients(params)
    w = offset * float(unstable_direction(params)[1]) / p
    return (w / b) ** (1.0 / p)
