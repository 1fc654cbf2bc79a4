"""
Closed-form initial-value solution of the solvable cubic systems.

With y = a1 x1 + a2 x2 and w = b1 x1 + b2 x2 the system decouples into
y' = y^3 and w' = w^3 + g1 y w^2 + g2 y^2 w + g3 y^3. y(t) is explicit; the
ratio u = w/y obeys an implicit algebraic relation which is followed in t
by an ODE predictor and a Newton corrector, with the branch of every power
factor tracked by winding counters.

Usage:
  spec = IvpSpec(P, (1, 1), [0, 1 / 64, 1 / 32])
  traj = solve_ivp(spec)
  traj.states[-1]        # ~ (0.083228, 2.226173) for the decoupled example
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from scripts.core.algebra import tracked_power, winding_increment
from scripts.core.errors import (BlowUpError, ContinuationFailure, NumericalError,
                                 SingularFactorError, ValidationError)
from scripts.core.model import (CoefficientSet, ParameterSet, SpectralData, forward,
                                rhs_eval, spectral)
from scripts.integration.dopri import advance, integrate, system_problem

logger = logging.getLogger(__name__)

FIXED_POINT_TOL = 1e-10
POLE_TOL = 1e-12
NEWTON_MAX_ITER = 30
CORRECTOR_TOL = 1e-10
MAX_PHASE_JUMP = math.pi / 2
STEP_FLOOR = 1e-12
PREDICTOR_RTOL = 1e-10
PREDICTOR_ATOL = 1e-12

Windings = Tuple[int, int, int]


@dataclass
class IvpSpec:
    parameters: ParameterSet
    x0: Tuple[complex, complex]
    time_grid: Sequence[complex]

    def __post_init__(self):
        self.x0 = (complex(self.x0[0]), complex(self.x0[1]))
        self.time_grid = [complex(t) for t in self.time_grid]
        if not self.time_grid or self.time_grid[0] != 0:
            raise ValidationError("time grid must start at 0")
        for a, b in zip(self.time_grid[:-1], self.time_grid[1:]):
            if a == b:
                raise ValidationError("time grid has repeated points", {"t": str(a)})
            if a.imag == 0 and b.imag == 0 and b.real < a.real:
                raise ValidationError("real time grid must be increasing", {"t": [a.real, b.real]})

    @classmethod
    def from_coefficients(cls, C: CoefficientSet, x0, time_grid) -> "IvpSpec":
        from scripts.inversion.invert import invert
        return cls(invert(C).parameters, x0, time_grid)

    @property
    def y0(self) -> complex:
        P = self.parameters
        return P.a1 * self.x0[0] + P.a2 * self.x0[1]

    @property
    def w0(self) -> complex:
        P = self.parameters
        return P.b1 * self.x0[0] + P.b2 * self.x0[1]


@dataclass
class UPath:
    values: List[complex]
    windings: List[Windings]
    residuals: List[float]


@dataclass
class Trajectory:
    times: List[complex]
    states: np.ndarray
    y_values: List[complex]
    u_values: List[Optional[complex]]
    winding: List[Windings]
    implicit_residuals: List[float]
    truncated: bool = False
    singularity: Optional[Dict[str, object]] = None
    mode: str = "implicit"


@dataclass(frozen=True)
class SingularityReport:
    t_y: Optional[complex]
    t_w: Optional[complex]

    @property
    def earliest(self) -> Optional[complex]:
        times = [t for t in (self.t_y, self.t_w) if t is not None]
        return min(times, key=abs) if times else None


def _blowup_factor(y0: complex, t: complex) -> complex:
    return 1 - 2 * y0 * y0 * t


def y_exact(y0: complex, t: complex, winding: int = 0) -> complex:
    """y0 (1 - 2 y0^2 t)^(-1/2) on the branch selected by ``winding``."""
    y0, t = complex(y0), complex(t)
    z = _blowup_factor(y0, t)
    if abs(z) < 1e-14:
        raise BlowUpError("y(t) is singular", 1 / (2 * y0 * y0), {"t": str(t)})
    return y0 * tracked_power(z, -0.5, winding)


def _segment_hits_zero(za: complex, zb: complex) -> bool:
    d = zb - za
    if d == 0:
        return abs(za) < 1e-14
    s = min(1.0, max(0.0, -(za.conjugate() * d).real / abs(d) ** 2))
    return abs(za + s * d) < 1e-14 * max(1.0, abs(za), abs(zb))


def _y_prefix(y0: complex, times: Sequence[complex]):
    """y up to the first segment that meets the singular time, plus that error (or None)."""
    values: List[complex] = []
    windings: List[int] = []
    k = 0
    prev = None
    for t in times:
        z = _blowup_factor(y0, t)
        if prev is not None:
            if _segment_hits_zero(prev, z):
                return values, windings, BlowUpError("path crosses a singular time",
                                                     1 / (2 * y0 * y0))
            # a straight segment in t is straight in z, so one check per segment suffices
            k += winding_increment(prev, z)
        try:
            values.append(y_exact(y0, t, k))
        except BlowUpError as e:
            return values, windings, e
        windings.append(k)
        prev = z
    return values, windings, None


def y_along(y0: complex, times: Sequence[complex]) -> Tuple[List[complex], List[int]]:
    """y on a polyline of times, branch continuous from t = 0."""
    values, windings, err = _y_prefix(complex(y0), [complex(t) for t in times])
    if err is not None:
        raise err
    return values, windings


def _ratios(u: complex, u0: complex, S: SpectralData) -> List[complex]:
    out = []
    for uj in S.roots:
        if abs(u - uj) < POLE_TOL * (1 + abs(uj)):
            raise SingularFactorError("u touches a root of the spectral cubic",
                                      {"u": str(u), "root": str(uj)})
        out.append((u - uj) / (u0 - uj))
    return out


def _lhs(u: complex, u0: complex, S: SpectralData, winding: Windings) -> complex:
    value = 1 + 0j
    for r, lam, k in zip(_ratios(u, u0, S), S.lambdas, winding):
        value *= tracked_power(r, -2 * lam, k)
    return value


def u_implicit_residual(u: complex, t: complex, u0: complex, y0: complex,
                        S: SpectralData, winding: Windings = (0, 0, 0)) -> complex:
    """prod_j ((u - u_j)/(u0 - u_j))^(-2 lambda_j) - (1 - 2 y0^2 t)."""
    if S.lambdas is None:
        raise ValidationError("spectral data is degenerate")
    return _lhs(complex(u), complex(u0), S, winding) - _blowup_factor(complex(y0), complex(t))


def _newton(u: complex, t: complex, u0: complex, y0: complex, S: SpectralData,
            winding: Windings) -> Optional[Tuple[complex, float]]:
    target = _blowup_factor(y0, t)
    tol = CORRECTOR_TOL * max(1.0, abs(target))
    weights = [-2 * lam for lam in S.lambdas]
    for _ in range(NEWTON_MAX_ITER):
        lhs = _lhs(u, u0, S, winding)
        df = lhs * sum(wgt / (u - uj) for wgt, uj in zip(weights, S.roots))
        if df == 0 or not cmath.isfinite(df):
            return None
        du = (lhs - target) / df
        u -= du
        if abs(du) < 1e-15 * (1 + abs(u)):
            break
    res = abs(_lhs(u, u0, S, winding) - target)
    if not math.isfinite(res) or res > tol:
        return None
    return u, res


def _u_rhs(y0: complex, roots: Sequence[complex]):
    y0_sq = y0 * y0

    def rhs(t, v):
        p = (v - roots[0]) * (v - roots[1]) * (v - roots[2])
        return y0_sq / _blowup_factor(y0, t) * p

    return rhs


def _u_prefix(u0: complex, y0: complex, S: SpectralData, grid: Sequence[complex],
              rtol: float, atol: float) -> Tuple[UPath, Optional[NumericalError]]:
    rhs = _u_rhs(y0, S.roots)
    u, winding = u0, (0, 0, 0)
    path = UPath([u0], [winding], [0.0])
    for t_a, t_b in zip(grid[:-1], grid[1:]):
        span = abs(t_b - t_a)
        t_cur, frac = t_a, 1.0
        while t_cur != t_b:
            t_next = t_b if frac >= 1.0 else t_cur + frac * (t_b - t_cur)
            accepted = None
            try:
                pred = complex(advance(rhs, t_cur, t_next, np.array([u]), rtol, atol)[0])
                prev_r = _ratios(u, u0, S)
                trial = tuple(k + winding_increment(a, b)
                              for k, a, b in zip(winding, prev_r, _ratios(pred, u0, S)))
                corrected = _newton(pred, t_next, u0, y0, S, trial)
                if corrected is not None:
                    new_r = _ratios(corrected[0], u0, S)
                    jump = max(abs(cmath.phase(b / a)) for a, b in zip(prev_r, new_r))
                    final = tuple(k + winding_increment(a, b)
                                  for k, a, b in zip(winding, prev_r, new_r))
                    if jump <= MAX_PHASE_JUMP and final == trial:
                        accepted = (corrected[0], trial)
            except (BlowUpError, SingularFactorError) as e:
                logger.debug(f"u step to {t_next} failed: {e.message}")
            if accepted is None:
                frac /= 2
                if frac * abs(t_b - t_cur) < STEP_FLOOR * max(span, 1e-300):
                    return path, ContinuationFailure(
                        "u continuation step fell below floor", t_cur,
                        {"u": str(u), "windings": list(winding)})
                continue
            u, winding = accepted
            t_cur = t_next
            frac = min(1.0, 2 * frac)
        path.values.append(u)
        path.windings.append(winding)
        path.residuals.append(abs(u_implicit_residual(u, t_b, u0, y0, S, winding)))
    return path, None


def u_of_t(u0: complex, y0: complex, S: SpectralData, time_grid: Sequence[complex],
           rtol: float = PREDICTOR_RTOL, atol: float = PREDICTOR_ATOL) -> UPath:
    """u = w/y along the grid, continuous in t.

    Each step predicts with an adaptive RK step of u' = y^2 P(u) and corrects
    with Newton on the implicit relation; a step is halved when Newton fails
    or a factor's phase jumps by more than pi/2.
    """
    if S.lambdas is None:
        raise ValidationError("spectral data is degenerate")
    grid = [complex(t) for t in time_grid]
    path, err = _u_prefix(complex(u0), complex(y0), S, grid, rtol, atol)
    if err is not None:
        raise err
    return path


def _u_rk_prefix(u0: complex, y0: complex, S: SpectralData,
                 grid: Sequence[complex]) -> Tuple[UPath, Optional[NumericalError]]:
    rhs = _u_rhs(y0, S.roots)
    u = np.array([u0])
    path = UPath([u0], [(0, 0, 0)], [math.nan])
    for t_a, t_b in zip(grid[:-1], grid[1:]):
        try:
            u = advance(rhs, t_a, t_b, u)
        except BlowUpError as e:
            return path, e
        path.values.append(complex(u[0]))
        path.windings.append((0, 0, 0))
        path.residuals.append(math.nan)
    return path, None


def _reconstruct(P: ParameterSet, y: complex, w: complex) -> Tuple[complex, complex]:
    c = P.c
    return ((P.b2 * y - P.a2 * w) / c, (P.a1 * w - P.b1 * y) / c)


def _singularity_info(err: NumericalError) -> Dict[str, object]:
    t = err.t_star if isinstance(err, BlowUpError) else getattr(err, "t", None)
    return {"error": type(err).__name__, "message": err.message,
            "t": None if t is None else [complex(t).real, complex(t).imag]}


def solve_ivp(spec: IvpSpec) -> Trajectory:
    """x(t) on spec.time_grid; a singularity on the path truncates the trajectory."""
    P = spec.parameters
    grid = list(spec.time_grid)
    n = len(grid)
    if spec.x0 == (0j, 0j):
        return Trajectory(grid, np.zeros((n, 2), dtype=complex), [0j] * n, [0j] * n,
                          [(0, 0, 0)] * n, [0.0] * n, mode="equilibrium")

    y0, w0 = spec.y0, spec.w0
    if y0 == 0:
        # y stays 0 and w' = w^3
        w_values, w_wind, err = _y_prefix(w0, grid)
        m = len(w_values)
        states = np.array([_reconstruct(P, 0j, w) for w in w_values], dtype=complex)
        return Trajectory(grid[:m], states, [0j] * m, [None] * m, [(k, 0, 0) for k in w_wind],
                          [0.0] * m, err is not None, _singularity_info(err) if err else None,
                          mode="y0=0")

    y_values, _, err = _y_prefix(y0, grid)
    grid = grid[:len(y_values)]
    S = spectral(*P.gamma)
    u0 = w0 / y0
    if S.degenerate:
        logger.warning("spectral cubic has a repeated root, following u by RK only")
        mode = "rk"
        path, u_err = _u_rk_prefix(u0, y0, S, grid)
    elif any(abs(u0 - uj) < FIXED_POINT_TOL * (1 + abs(uj)) for uj in S.roots):
        mode = "fixed-point"
        path, u_err = UPath([u0] * len(grid), [(0, 0, 0)] * len(grid), [0.0] * len(grid)), None
    else:
        mode = "implicit"
        path, u_err = _u_prefix(u0, y0, S, grid, PREDICTOR_RTOL, PREDICTOR_ATOL)
    err = u_err or err

    m = len(path.values)
    states = np.array([_reconstruct(P, y, u * y) for y, u in zip(y_values, path.values)],
                      dtype=complex)
    traj = Trajectory(grid[:m], states, y_values[:m], list(path.values), list(path.windings),
                      list(path.residuals), mode=mode)
    if err is not None:
        logger.warning(f"trajectory truncated after t = {traj.times[-1]}: {err.message}")
        traj.truncated = True
        traj.singularity = _singularity_info(err)
    return traj


def singularity_time(spec: IvpSpec) -> SingularityReport:
    """Times where y or (on the principal branches) w blow up."""
    y0, w0 = spec.y0, spec.w0
    if spec.x0 == (0j, 0j):
        return SingularityReport(None, None)
    if y0 == 0:
        return SingularityReport(None, 1 / (2 * w0 * w0))
    t_y = 1 / (2 * y0 * y0)
    S = spectral(*spec.parameters.gamma)
    u0 = w0 / y0
    if S.degenerate or any(abs(u0 - uj) < FIXED_POINT_TOL * (1 + abs(uj)) for uj in S.roots):
        return SingularityReport(t_y, None)
    prod = 1 + 0j
    for uj, lam in zip(S.roots, S.lambdas):
        prod *= tracked_power(u0 - uj, 2 * lam, 0)
    t_w = (1 - prod) / (2 * y0 * y0)
    return SingularityReport(t_y, t_w)


def ode_residuals(P: ParameterSet, traj: Trajectory) -> List[float]:
    """Midpoint finite-difference check of x' = rhs(x) on each grid interval.

    Entry k compares (x[k+1] - x[k]) / (t[k+1] - t[k]) with rhs((x[k] + x[k+1]) / 2),
    relative to |rhs|. Both sides agree to second order in the step, so the
    grid must be fine for the values to be small.
    """
    C = forward(P)
    n = len(traj.states)
    out = []
    for k in range(n - 1):
        dt = complex(traj.times[k + 1]) - complex(traj.times[k])
        if dt == 0:
            out.append(math.nan)
            continue
        slope = (traj.states[k + 1] - traj.states[k]) / dt
        mid = (traj.states[k] + traj.states[k + 1]) / 2
        f = np.array(rhs_eval(C, mid[0], mid[1]))
        out.append(float(np.max(np.abs(slope - f)) / (np.max(np.abs(f)) + 1e-300)))
    return out


def integrator_deviation(spec: IvpSpec, traj: Trajectory,
                         rtol: float = 1e-11, atol: float = 1e-13) -> List[float]:
    """Per-sample |x_closed - x_rk| / max(1, |x_rk|) against the RK oracle."""
    problem = system_problem(forward(spec.parameters), spec.x0, traj.times, rtol, atol)
    sol = integrate(problem)
    n = min(len(sol.states), len(traj.states))
    dev = []
    for k in range(n):
        ref = sol.states[k]
        dev.append(float(np.max(np.abs(traj.states[k] - ref)) / max(1.0, float(np.max(np.abs(ref))))))
    return dev
