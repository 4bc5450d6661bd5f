"""
Adaptive integration of the Lotka-Volterra system along the unstable manifold
of the saddle (n + sigma, 0), with level-crossing detection on the dense orbit.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import RK45, OdeSolution
from scipy.optimize import brentq

from hessian_lv.analysis.exponents import (Params, Regime, c_nk,
                                           classify_regime, interior_point)
from hessian_lv.analysis.phase import PhasePoint, lv_rhs
from hessian_lv.config import (ABS_TOL, CROSSING_TOL, MAX_STEPS, REL_TOL,
                               SADDLE_RADIUS, SINK_RADIUS, T_MAX)
from hessian_lv.dynamics.series import launch_radius, series_phase_point
from hessian_lv.errors import DomainError, NonConvergence, RegimeError
from hessian_lv.utils.logger import setup_logger

logger = setup_logger(__name__)

# dense-output samples per accepted step when scanning for sign changes
_SAMPLES_PER_STEP = 8


class Termination(str, Enum):
    """Reason the integration stopped."""
    REACHED_SINK = "ReachedSink"
    TIME_LIMIT = "TimeLimit"
    LEFT_QUADRANT = "LeftQuadrant"
    REACHED_SADDLE = "ReachedSaddle"
    CLOSED_ORBIT = "ClosedOrbit"


class IntegratorConfig(BaseModel):
    """Tolerances and limits of integrate_orbit."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=REL_TOL, gt=0, le=1e-6)
    abs_tol: float = Field(default=ABS_TOL, gt=0, le=1e-6)
    t_max: float = Field(default=T_MAX, gt=0)
    epsilon_launch: Optional[float] = Field(default=None, gt=0)
    sink_radius: float = Field(default=SINK_RADIUS, gt=0)
    saddle_radius: float = Field(default=SADDLE_RADIUS, gt=0)
    max_steps: int = Field(default=MAX_STEPS, gt=0)

    def launch_offset(self, params: Params) -> float:
        """
        Distance of the launch point from the saddle, along the unstable eigenvector.

        Defaults to 1e-8 (n + sigma); explicit values above 1e-4 (n + sigma) are rejected.
        """
        scale = params.n + params.sigma
        if self.epsilon_launch is None:
            return 1e-8 * scale
        if self.epsilon_launch > 1e-4 * scale:
            raise DomainError(
                f"epsilon_launch {self.epsilon_launch:g} exceeds 1e-4·(n+σ) = {1e-4 * scale:g}"
            )
        return self.epsilon_launch


@dataclass(frozen=True)
class Orbit:
    """
    Accepted samples of one integration plus their dense interpolant.

    Attributes:
        t: Strictly increasing sample times, t[0] = 0 at launch
        xy: Samples, shape (len(t), 2)
        terminated: Why integration stopped
        params: Parameters the orbit was computed for
        dense: Piecewise interpolant valid on [t[0], t[-1]]
        time_shift: T with s = exp(t + T) the variable of the normalised
            initial value problem; None for orbits started off the saddle
    """
    t: np.ndarray = field(repr=False)
    xy: np.ndarray = field(repr=False)
    terminated: Termination
    params: Params
    dense: OdeSolution = field(repr=False, compare=False)
    time_shift: Optional[float] = None

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def final_point(self) -> PhasePoint:
        x, y = self.xy[-1]
        return PhasePoint(max(float(x), 0.0), max(float(y), 0.0))

    @property
    def samples(self) -> List[Tuple[float, PhasePoint]]:
        """Samples as (t, PhasePoint) pairs."""
        return [(float(t), PhasePoint(max(float(x), 0.0), max(float(y), 0.0)))
                for t, (x, y) in zip(self.t, self.xy)]

    def evaluate(self, t):
        """
        Dense (x, y) at time(s) t inside [t_start, t_end].

        Returns:
            Array of shape (2,) for scalar t, (2, m) for an array of m times
        """
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.t_start - 1e-12) or np.any(t_arr > self.t_end + 1e-12):
            raise DomainError(
                f"t outside orbit range [{self.t_start:g}, {self.t_end:g}]"
            )
        return self.dense(np.clip(t_arr, self.t_start, self.t_end))


def _launch(params: Params, cfg: IntegratorConfig) -> Tuple[np.ndarray, float]:
    """
    Start point near the saddle and the gauge T with s = exp(t + T).

    The start is the phase image of the expansion of v at the launch radius
    s_l, so t = 0 corresponds to s = s_l and T = ln s_l. Its displacement
    from the saddle is tangent to the unstable eigenvector.
    """
    s_launch = launch_radius(cfg.launch_offset(params), params)
    x0, y0 = series_phase_point(s_launch, params)
    return np.array([x0, y0]), math.log(s_launch)


def _section_crossing(dense_step, t_old: float, t_new: float, center: np.ndarray,
                      ray: np.ndarray, rotation: float) -> Optional[float]:
    """Return time in (t_old, t_new] where the orbit recrosses the launch ray."""
    def side(t: float) -> float:
        d = dense_step(t) - center
        return rotation * (ray[0] * d[1] - ray[1] * d[0])

    g_old, g_new = side(t_old), side(t_new)
    if not (g_old < 0 <= g_new):
        return None
    d_new = dense_step(t_new) - center
    if float(np.dot(d_new, ray)) <= 0:
        return None
    if g_new == 0:
        return t_new
    return brentq(side, t_old, t_new, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def integrate_orbit(params: Params, cfg: Optional[IntegratorConfig] = None,
                    start: Optional[PhasePoint] = None) -> Orbit:
    """
    Integrate the orbit leaving the saddle (n + sigma, 0).

    Args:
        params: Problem parameters
        cfg: Integrator configuration, defaults from hessian_lv.config
        start: Optional starting point instead of the saddle launch

    Returns:
        Orbit

    Raises:
        RegimeError: in the UnstableExcluded regime
        NonConvergence: if max_steps is exhausted or a step fails
    """
    cfg = cfg or IntegratorConfig()
    regime = classify_regime(params)
    if regime == Regime.UNSTABLE_EXCLUDED:
        raise RegimeError(
            f"q = {params.q:g} is below q* = ((n+2)k+σ(k+1))/(n−2k); the interior point is unstable"
        )

    sink = np.array(interior_point(params))
    saddle_top = np.array([0.0, (params.n - 2 * params.k) / params.k])
    center = regime == Regime.CENTER

    # Saddle launch unless an explicit start point is given
    if start is None:
        state0, time_shift = _launch(params, cfg)
    else:
        state0 = start.as_array()
        time_shift = None

    # Closed-orbit section through the start point, interior starts only
    ray = state0 - sink
    rotation = 0.0
    rhs = lv_rhs(params)
    if center and start is not None and np.linalg.norm(ray) > 0:
        f0 = rhs(0.0, state0)
        rotation = math.copysign(1.0, ray[0] * f0[1] - ray[1] * f0[0])

    # y leaves the saddle at the scale of the launch offset
    y_scale = min(1.0, float(state0[1])) if state0[1] > 0 else 1.0
    atol = np.array([cfg.abs_tol, cfg.abs_tol * y_scale])
    solver = RK45(rhs, 0.0, state0, t_bound=cfg.t_max,
                  rtol=cfg.rel_tol, atol=atol)
    ts = [0.0]
    states = [state0.copy()]
    interpolants = []
    terminated = None

    for _ in range(cfg.max_steps):
        solver.step()
        if solver.status == "failed":
            raise NonConvergence(f"step failure at t = {solver.t:g}")

        # Keep the step interpolant for the dense orbit
        step = solver.dense_output()
        t_old, t_new = ts[-1], solver.t
        state = solver.y.copy()

        # Stop at the first return to the section
        if rotation:
            t_cross = _section_crossing(step, t_old, t_new, sink, ray, rotation)
            if t_cross is not None:
                interpolants.append(step)
                ts.append(t_cross)
                states.append(step(t_cross))
                terminated = Termination.CLOSED_ORBIT
                gap = float(np.linalg.norm(states[-1] - state0))
                logger.debug(f"Closed orbit returned to section with gap {gap:.3e}")
                break

        interpolants.append(step)
        ts.append(t_new)
        states.append(state)

        # Check termination conditions
        if np.any(state < 0):
            terminated = Termination.LEFT_QUADRANT
            break
        if not center and np.linalg.norm(state - sink) < cfg.sink_radius:
            terminated = Termination.REACHED_SINK
            break
        if center and np.linalg.norm(state - saddle_top) < cfg.saddle_radius:
            terminated = Termination.REACHED_SADDLE
            break
        if solver.status == "finished":
            terminated = Termination.TIME_LIMIT
            break

    if terminated is None:
        raise NonConvergence(
            f"max_steps = {cfg.max_steps} exhausted at t = {ts[-1]:g} before termination"
        )

    t_arr = np.array(ts)
    orbit = Orbit(
        t=t_arr,
        xy=np.array(states),
        terminated=terminated,
        params=params,
        dense=OdeSolution(t_arr, interpolants),
        time_shift=time_shift,
    )
    logger.info(
        f"Orbit integrated for {params}: {len(ts)} samples, "
        f"t_end = {orbit.t_end:.6g}, terminated = {terminated.value}"
    )
    return orbit


def lambda_profile(orbit: Orbit, params: Params) -> Callable:
    """
    Lambda(t) = c_{n,k} x(t) y(t)^k along the orbit.

    Args:
        orbit: Integrated orbit
        params: Problem parameters

    Returns:
        Vectorised function of t on the orbit's range
    """
    c = c_nk(params)
    k = params.k

    def profile(t):
        xy = orbit.evaluate(t)
        return c * xy[0] * xy[1] ** k

    return profile


def level_crossings(orbit: Orbit, level: float, params: Params) -> List[float]:
    """
    Times where Lambda(t) crosses a level.

    Each accepted step is sampled on its dense output, and sign changes of
    Lambda - level are refined with brentq to
    |Lambda(t) - level| < 1e-10 max(1, level).

    Args:
        orbit: Integrated orbit
        level: Value of lambda
        params: Problem parameters

    Returns:
        Strictly increasing list of crossing times, possibly empty
    """
    lam = lambda_profile(orbit, params)

    def g(t):
        return lam(t) - level

    t_scan = np.unique(np.concatenate([
        np.linspace(a, b, _SAMPLES_PER_STEP + 1)
        for a, b in zip(orbit.t[:-1], orbit.t[1:])
    ])) if len(orbit.t) > 1 else orbit.t
    values = g(t_scan)
    tol = CROSSING_TOL * max(1.0, abs(level))

    crossings = []
    sign_prev = np.sign(values[0])
    t_prev = t_scan[0]
    for t_i, v_i in zip(t_scan[1:], values[1:]):
        sign_i = np.sign(v_i)
        if sign_i == 0:
            continue
        if sign_prev != 0 and sign_i != sign_prev:
            root = brentq(g, t_prev, t_i, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            if abs(g(root)) > tol:
                logger.warning(
                    f"Crossing at t = {root:.6g} refined only to {abs(g(root)):.3e}"
                )
            if not crossings or root > crossings[-1]:
                crossings.append(float(root))
                logger.debug(f"Level {level:g} crossed at t = {root:.12g}")
        sign_prev = sign_i
        t_prev = t_i

    return crossings


def is_monotone_graph(orbit: Orbit) -> bool:
    """True when y strictly increases and x strictly decreases along the samples."""
    dx = np.diff(orbit.xy[:, 0])
    dy = np.diff(orbit.xy[:, 1])
    return bool(np.all(dy > 0) and np.all(dx < 0))
