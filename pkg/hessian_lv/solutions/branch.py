"""
Radial solutions of (P_lambda) read off the Lotka-Volterra orbit: reconstruction
at a crossing time, solution counts per lambda and the bifurcation branch.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from hessian_lv.analysis.exponents import (Params, Regime, classify_regime,
                                           lambda_bar)
from hessian_lv.analysis.phase import oscillation_period
from hessian_lv.config import GRID_POINTS, HESSIAN_LV_THREADS
from hessian_lv.dynamics.integrator import (Orbit, Termination, lambda_profile,
                                            level_crossings)
from hessian_lv.dynamics.ivp import phase_to_profile
from hessian_lv.dynamics.series import series_profile
from hessian_lv.errors import DomainError
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)

# first positive radius of the reconstruction grid
_R_MIN = 1e-4


class SolutionSource(str, Enum):
    """Where a radial solution came from."""
    RECONSTRUCTED = "Reconstructed"
    CLOSED_FORM_MINUS = "ClosedFormMinus"
    CLOSED_FORM_PLUS = "ClosedFormPlus"
    CLOSED_FORM_EXTREMAL = "ClosedFormExtremal"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class RadialSolution:
    """
    Samples of a radial profile u on a grid of radii.

    Attributes:
        r: Nondecreasing radii
        u: Values u(r)
        lam: Parameter lambda the profile solves (P_lambda) for
        u0: u(0); -inf for the singular solution
        source: Origin of the profile
        du: Exact derivative samples when available
    """
    r: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    lam: float
    u0: float
    source: SolutionSource
    du: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.r.tolist(), self.u.tolist()))


@dataclass(frozen=True)
class BifurcationSample:
    """One point (t0, Lambda(t0), A(t0)) of the solution branch."""
    t0: float
    lam: float
    A: float


def default_grid(num: Optional[int] = None) -> np.ndarray:
    """Geometric radii on [1e-4, 1] plus r = 0."""
    num = num or GRID_POINTS
    return np.concatenate(([0.0], np.geomspace(_R_MIN, 1.0, num - 1)))


def _require_saddle_launch(orbit: Orbit) -> float:
    if orbit.time_shift is None:
        raise DomainError("orbit was not launched from the saddle (n+σ, 0)")
    return orbit.time_shift


def _profile_at(orbit: Orbit, s: np.ndarray, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values v(s), v'(s) of the normalised profile traced by the orbit.

    Radii below the launch radius use the same two-term series the orbit
    was launched from, so v is continuous across the handoff.
    """
    shift = _require_saddle_launch(orbit)

    v = np.empty_like(s)
    dv = np.empty_like(s)
    with np.errstate(divide="ignore"):
        t = np.where(s > 0, np.log(np.where(s > 0, s, 1.0)) - shift, -np.inf)

    on_orbit = t >= orbit.t_start
    early = ~on_orbit
    v[early], dv[early] = series_profile(s[early], params)

    if np.any(on_orbit):
        x, y = orbit.evaluate(t[on_orbit])
        v_orbit = phase_to_profile(t[on_orbit] + shift, x, y, lambda_bar(params), params)
        v[on_orbit] = v_orbit
        dv[on_orbit] = y * (-v_orbit) / s[on_orbit]
    return v, dv


def branch_values(orbit: Orbit, t0, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lambda(t0) and A(t0) = u(0) along the orbit, vectorised in t0.

    A follows from v(s0) = -1/(1 - A) with s0 = exp(t0 + T).
    """
    shift = _require_saddle_launch(orbit)
    t0 = np.atleast_1d(np.asarray(t0, dtype=float))
    lam = lambda_profile(orbit, params)(t0)
    x, y = orbit.evaluate(t0)
    v0 = phase_to_profile(t0 + shift, x, y, lambda_bar(params), params)
    return lam, 1.0 + 1.0 / v0


def reconstruct_solution(orbit: Orbit, t0: float, params: Params,
                         grid: Optional[np.ndarray] = None) -> RadialSolution:
    """
    Radial solution of (P_lambda) for lambda = c_{n,k} x(t0) y(t0)^k.

    u(r) = 1 + (1 - A) v(s0 r) with s0 = exp(t0 + T) and A = 1 + 1/v(s0).

    Args:
        orbit: Orbit launched from the saddle
        t0: Time inside the orbit range
        params: Problem parameters
        grid: Radii in [0, 1], defaults to default_grid()

    Returns:
        RadialSolution with exact derivative samples

    Raises:
        DomainError: if Lambda(t0) <= 0 or t0 is outside the orbit
    """
    lam_values, a_values = branch_values(orbit, t0, params)
    lam, A = float(lam_values[0]), float(a_values[0])
    if not lam > 0:
        raise DomainError(f"Λ(t0) = {lam:g} ≤ 0 at t0 = {t0:g}")

    r = default_grid() if grid is None else np.asarray(grid, dtype=float)
    s0 = math.exp(t0 + orbit.time_shift)
    v, dv = _profile_at(orbit, s0 * r, params)
    u = 1.0 + (1.0 - A) * v
    du = (1.0 - A) * s0 * dv

    logger.debug(f"Reconstructed solution at t0 = {t0:.12g}: λ = {lam:.12g}, u(0) = {A:.12g}")
    return RadialSolution(r=r, u=u, lam=lam, u0=A,
                          source=SolutionSource.RECONSTRUCTED, du=du)


def reconstruct_all(orbit: Orbit, times: Sequence[float], params: Params,
                    grid: Optional[np.ndarray] = None) -> List[RadialSolution]:
    """
    Reconstruct one solution per time on a worker pool.

    The pool size is min(HESSIAN_LV_THREADS, len(times)).
    """
    if not times:
        return []
    workers = min(HESSIAN_LV_THREADS, len(times))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: reconstruct_solution(orbit, t, params, grid), times))


def count_solutions(orbit: Orbit, lam: float, params: Params) -> Tuple[int, bool]:
    """
    Number of radial solutions for lambda found in the orbit window.

    Returns:
        (count, saturated); saturated is true in the spiral regime when the
        window ends at the time limit or the sink and the last crossing lies
        within one oscillation period of its end

    Raises:
        DomainError: if lambda <= 0
    """
    if not lam > 0:
        raise DomainError("λ ≤ 0")
    crossings = level_crossings(orbit, lam, params)
    # Heteroclinic and closed orbits are complete; only an open spiral window
    # that is still crossing can hide further solutions
    saturated = False
    open_window = orbit.terminated in (Termination.TIME_LIMIT, Termination.REACHED_SINK)
    if crossings and open_window and classify_regime(params) == Regime.SPIRAL:
        period = oscillation_period(params)
        saturated = period is not None and orbit.t_end - crossings[-1] < period
    if saturated:
        logger.warning(
            f"λ = {lam:g}: {len(crossings)} crossings and still crossing at the "
            f"end of the window; the count is a lower bound"
        )
    return len(crossings), saturated


def bifurcation_diagram(orbit: Orbit, params: Params, t_grid) -> List[BifurcationSample]:
    """
    Samples (t0, Lambda(t0), A(t0)) of the solution branch.

    Args:
        orbit: Orbit launched from the saddle
        params: Problem parameters
        t_grid: Times inside the orbit range

    Returns:
        List of BifurcationSample in grid order
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size and (t_grid.min() < orbit.t_start or t_grid.max() > orbit.t_end):
        raise DomainError(
            f"t_grid must lie in the orbit range [{orbit.t_start:g}, {orbit.t_end:g}]"
        )
    lam, A = branch_values(orbit, t_grid, params)
    logger.info(f"Bifurcation diagram with {t_grid.size} samples, sup Λ = {lam.max():.12g}")
    return [BifurcationSample(t0=float(t), lam=float(l), A=float(a))
            for t, l, a in zip(t_grid, lam, A)]


def lambda_star_lower_bound(orbit: Orbit, params: Params) -> float:
    """
    sup Lambda(t) over the computed window.

    Every lambda below it has at least one solution on the window.
    """
    t_scan = np.unique(np.concatenate([
        np.linspace(a, b, 9) for a, b in zip(orbit.t[:-1], orbit.t[1:])
    ])) if len(orbit.t) > 1 else orbit.t
    return float(np.max(lambda_profile(orbit, params)(t_scan)))
