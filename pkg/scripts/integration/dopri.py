"""
Adaptive Dormand-Prince 5(4) integrator for complex-valued states.

Complex time is handled by integrating along straight segments (a polyline
through the requested sample times) or along a circle parametrized by angle.
On every piece the independent variable is a real parameter s and the
right-hand side is multiplied by dt/ds, so the stepper itself only ever
takes real steps.

Usage:
  from scripts.integration.dopri import OdeProblem, integrate
  sol = integrate(OdeProblem(rhs=lambda t, x: x ** 3, x0=[1.0], times=[0, 0.375]))
  sol.states[-1]          # ~ [2]
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from scripts.core.errors import BlowUpError, ValidationError
from scripts.core.model import CoefficientSet, rhs_vector

logger = logging.getLogger(__name__)

RTOL = 1e-10
ATOL = 1e-12
BLOWUP_NORM = 1e12
STEP_FLOOR = 1e-12
SAFETY = 0.9
MAX_FACTOR = 5.0
MIN_FACTOR = 0.2
MAX_STEPS = 200000

# Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th and 4th order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

Rhs = Callable[[complex, np.ndarray], np.ndarray]


@dataclass
class OdeProblem:
    """x' = rhs(t, x) with x(times[0]) = x0, sampled at ``times``.

    ``times`` are complex in general; consecutive samples are joined by
    straight segments, so inserting intermediate points routes the path.
    """
    rhs: Rhs
    x0: Sequence[complex]
    times: Sequence[complex]
    rtol: float = RTOL
    atol: float = ATOL

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=complex).reshape(-1)
        self.times = [complex(t) for t in self.times]
        if not self.times:
            raise ValidationError("time grid is empty")
        if self.times[0] != 0:
            raise ValidationError("path must start at t = 0", {"t0": str(self.times[0])})
        if self.rtol <= 0 or self.atol <= 0:
            raise ValidationError("tolerances must be positive",
                                  {"rtol": self.rtol, "atol": self.atol})
        if not np.all(np.isfinite(self.x0)):
            raise ValidationError("initial state is not finite")

    @property
    def dimension(self) -> int:
        return int(self.x0.shape[0])


@dataclass
class OdeSolution:
    times: List[complex]
    states: np.ndarray
    blow_up: bool = False
    t_blowup: Optional[complex] = None
    accepted: int = 0
    rejected: int = 0
    closure_defect: Optional[float] = None
    message: str = ""

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    err_prev: float = 1e-4
    h: Optional[float] = None


def dopri_step(fun, s: float, x: np.ndarray, h: float, k1: np.ndarray):
    """One Dormand-Prince step. Returns (x_new, error_vector, k7)."""
    K = [k1]
    for i in range(1, 7):
        dx = sum(a * k for a, k in zip(_A[i], K))
        K.append(fun(s + _C[i] * h, x + h * dx))
    x_new = x + h * sum(b * k for b, k in zip(_B5, K))
    err = h * sum(e * k for e, k in zip(_E, K))
    return x_new, err, K[6]


def _error_norm(err: np.ndarray, x: np.ndarray, x_new: np.ndarray, rtol: float, atol: float) -> float:
    sc = atol + rtol * np.maximum(np.abs(x), np.abs(x_new))
    return float(np.sqrt(np.mean(np.abs(err / sc) ** 2)))


def _initial_step(fun, s: float, x: np.ndarray, k1: np.ndarray, span: float,
                  rtol: float, atol: float) -> float:
    sc = atol + rtol * np.abs(x)
    d0 = float(np.sqrt(np.mean(np.abs(x / sc) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(k1 / sc) ** 2)))
    h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6 * span
    return min(h, span)


def march(fun, s_start: float, s_end: float, x: np.ndarray, rtol: float, atol: float,
          stats: Optional[StepStats] = None) -> np.ndarray:
    """Integrate dx/ds = fun(s, x) for real s from s_start to s_end.

    Raises BlowUpError (with the parameter value reached) when the state
    norm exceeds BLOWUP_NORM or the step falls below the floor.
    """
    stats = stats or StepStats()
    span = s_end - s_start
    if span == 0:
        return x
    x = np.array(x, dtype=complex)
    s = s_start
    k1 = fun(s, x)
    h = stats.h if stats.h else _initial_step(fun, s, x, k1, span, rtol, atol)
    floor = STEP_FLOOR * max(abs(span), 1e-300)
    for _ in range(MAX_STEPS):
        if s >= s_end:
            break
        h = min(h, s_end - s)
        with np.errstate(all="ignore"):
            x_new, err, k7 = dopri_step(fun, s, x, h, k1)
            err_norm = _error_norm(err, x, x_new, rtol, atol)
        if not np.isfinite(err_norm):
            err_norm = math.inf
        if err_norm <= 1.0:
            factor = SAFETY * max(err_norm, 1e-10) ** (-0.7 / 5) * stats.err_prev ** (0.4 / 5)
            stats.err_prev = max(err_norm, 1e-4)
            stats.accepted += 1
            s = s + h if s + h < s_end else s_end
            x, k1 = x_new, k7
            if np.linalg.norm(x) > BLOWUP_NORM:
                raise BlowUpError("state norm exceeded blow-up threshold", s,
                                  {"norm": float(np.linalg.norm(x))})
            h *= min(MAX_FACTOR, max(MIN_FACTOR, factor))
        else:
            stats.rejected += 1
            factor = SAFETY * err_norm ** (-1 / 5) if math.isfinite(err_norm) else MIN_FACTOR
            h *= max(MIN_FACTOR, min(1.0, factor))
            if h < floor and s_end - s > floor:
                raise BlowUpError("step size fell below floor", s, {"h": h})
        stats.h = h
    else:
        raise BlowUpError("step budget exhausted", s, {"max_steps": MAX_STEPS})
    return x


def advance(rhs: Rhs, t_a: complex, t_b: complex, x: np.ndarray,
            rtol: float = RTOL, atol: float = ATOL, stats: Optional[StepStats] = None) -> np.ndarray:
    """x(t_b) from x(t_a) along the straight segment [t_a, t_b] in complex time."""
    d = complex(t_b) - complex(t_a)
    if d == 0:
        return np.array(x, dtype=complex)

    def fun(s, y):
        return d * rhs(t_a + s * d, y)

    try:
        return march(fun, 0.0, 1.0, np.asarray(x, dtype=complex), rtol, atol, stats)
    except BlowUpError as e:
        raise BlowUpError(e.message, t_a + e.t_star * d, e.details) from e


def integrate(problem: OdeProblem) -> OdeSolution:
    """Sample the solution at every requested time.

    A blow-up truncates the output: the states already reached are kept and
    ``blow_up``/``t_blowup`` report where the integration stopped.
    """
    stats = StepStats()
    x = problem.x0.copy()
    times = [problem.times[0]]
    states = [x.copy()]
    for t_a, t_b in zip(problem.times[:-1], problem.times[1:]):
        try:
            x = advance(problem.rhs, t_a, t_b, x, problem.rtol, problem.atol, stats)
        except BlowUpError as e:
            logger.warning(f"integration stopped near t = {e.t_star:.6g}: {e.message}")
            return OdeSolution(times, np.array(states), True, e.t_star,
                               stats.accepted, stats.rejected, message=e.message)
        times.append(t_b)
        states.append(x.copy())
    logger.debug(f"integrate: {stats.accepted} accepted, {stats.rejected} rejected steps")
    return OdeSolution(times, np.array(states), False, None, stats.accepted, stats.rejected)


def integrate_circle(problem: OdeProblem, radius: float, center: complex, samples: int,
                     clockwise: bool = False) -> OdeSolution:
    """Integrate once around the circle |t - center| = radius.

    The circle starts at the point nearest to t = 0 (reached first along a
    straight segment) and is sampled at ``samples`` equal angles. The closure
    defect is |x(end) - x(start)|; a blow-up on the way sets ``blow_up``.
    ``problem.times`` is ignored apart from its starting point.
    """
    if samples < 1:
        raise ValidationError("samples must be >= 1", {"samples": samples})
    if radius < 0:
        raise ValidationError("radius must be >= 0", {"radius": radius})
    center = complex(center)
    stats = StepStats()
    x = problem.x0.copy()
    if radius == 0:
        return OdeSolution([center] * (samples + 1), np.array([x] * (samples + 1)),
                           closure_defect=0.0)

    theta0 = cmath.phase(-center) if center != 0 else 0.0
    start = center + radius * cmath.exp(1j * theta0)
    try:
        x = advance(problem.rhs, 0j, start, x, problem.rtol, problem.atol, stats)
    except BlowUpError as e:
        return OdeSolution([0j], np.array([x]), True, e.t_star, stats.accepted, stats.rejected,
                           message=e.message)
    sign = -1.0 if clockwise else 1.0

    def tau(theta: float) -> complex:
        return center + radius * cmath.exp(1j * (theta0 + sign * theta))

    def fun(theta, y):
        dtau = 1j * sign * radius * cmath.exp(1j * (theta0 + sign * theta))
        return dtau * problem.rhs(tau(theta), y)

    x_start = x.copy()
    times = [start]
    states = [x.copy()]
    angles = np.linspace(0.0, 2 * math.pi, samples + 1)
    for th_a, th_b in zip(angles[:-1], angles[1:]):
        try:
            x = march(fun, float(th_a), float(th_b), x, problem.rtol, problem.atol, stats)
        except BlowUpError as e:
            logger.warning(f"circle integration hit a singularity near theta = {e.t_star:.6g}")
            return OdeSolution(times, np.array(states), True, tau(float(e.t_star)),
                               stats.accepted, stats.rejected, message="near branch point")
        times.append(tau(float(th_b)))
        states.append(x.copy())
    defect = float(np.linalg.norm(x - x_start))
    return OdeSolution(times, np.array(states), False, None, stats.accepted, stats.rejected,
                       closure_defect=defect)


def system_problem(C: CoefficientSet, x0: Sequence[complex], times: Sequence[complex],
                   rtol: float = RTOL, atol: float = ATOL) -> OdeProblem:
    """OdeProblem for the cubic system with coefficients C."""
    return OdeProblem(rhs=rhs_vector(C), x0=x0, times=times, rtol=rtol, atol=atol)
