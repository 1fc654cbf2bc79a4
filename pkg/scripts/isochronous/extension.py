"""
Isochronous extension of a cubic system.

    x~' = i omega x~ + rhs(x~)

is related to the base system by x~(t) = exp(i omega t) x(tau(t)) with
tau(t) = (exp(2 i omega t) - 1)/(2 i omega). tau runs around a circle of
radius 1/(2|omega|) through 0, so x~ has period T~ = 2 pi/|omega| whenever
x(tau) is holomorphic inside that circle, and an integer multiple of it when
branch points of x(tau) are enclosed.

Usage:
  report = detect_period(C, omega=1.0, x0=(0.01, 0.02))
  report.k              # 1 in the small-data regime
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Generator, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from scripts.core.errors import (BlowUpError, CubicFlowError, PathSingularError,
                                 SingularTrajectoryError, ValidationError)
from scripts.core.model import (CoefficientSet, ParameterSet, SpectralData, forward, rhs_vector,
                                spectral)
from scripts.integration.dopri import OdeProblem, OdeSolution, StepStats, advance, integrate_circle
from scripts.solver.exact import IvpSpec, solve_ivp

logger = logging.getLogger(__name__)

K_MAX = 24
PERIOD_EPS = 1e-7
MAX_DENOMINATOR = 64
RATIONAL_TOL = 1e-8
CF_EPS = 1e-12
ARC_STEP = math.pi / 16
RTOL = 1e-11
ATOL = 1e-14
FD_STEP = 1e-4


@dataclass(frozen=True)
class IsochronousSystem:
    base: CoefficientSet
    omega: float

    def __post_init__(self):
        if isinstance(self.omega, complex) or not math.isfinite(self.omega) or self.omega == 0:
            raise ValidationError("omega must be a nonzero real number", {"omega": str(self.omega)})

    @property
    def T(self) -> float:
        return math.pi / abs(self.omega)

    @property
    def T_tilde(self) -> float:
        return 2 * self.T

    @property
    def center(self) -> complex:
        return 1j / (2 * self.omega)

    @property
    def radius(self) -> float:
        return 1 / (2 * abs(self.omega))

    def rhs(self):
        return tilde_rhs(self.base, self.omega)


@dataclass(frozen=True)
class RationalityReport:
    rational: bool
    fractions: List[Tuple[int, int]] = field(default_factory=list)
    lcm_denominator: Optional[int] = None


@dataclass
class PeriodReport:
    k: Optional[int]
    defect_at_kT: List[float]
    rational_lambdas: Optional[RationalityReport] = None
    T_tilde: float = 0.0


@dataclass
class TildeTrajectory:
    times: List[float]
    taus: List[complex]
    states: np.ndarray
    # midpoint check of the extended equation just after each sample
    residuals: List[float] = field(default_factory=list)


def tau_of_t(omega: float, t: float) -> complex:
    return (cmath.exp(2j * omega * t) - 1) / (2j * omega)


def tilde_rhs(C: CoefficientSet, omega: float):
    base = rhs_vector(C)

    def f(t, x: np.ndarray) -> np.ndarray:
        return 1j * omega * x + base(t, x)

    return f


def _refine(omega: float, ts: Sequence[float]) -> Tuple[List[complex], List[int]]:
    """tau polyline hugging the circle, and the index of each requested t in it."""
    taus = [tau_of_t(omega, ts[0])]
    index = [0]
    for t_a, t_b in zip(ts[:-1], ts[1:]):
        m = max(1, math.ceil(abs(2 * omega * (t_b - t_a)) / ARC_STEP))
        for j in range(1, m + 1):
            taus.append(tau_of_t(omega, t_a + (t_b - t_a) * j / m))
        index.append(len(taus) - 1)
    return taus, index


def tilde_residual(C: CoefficientSet, omega: float, t0: float, x0: np.ndarray,
                   t1: float, x1: np.ndarray) -> float:
    """|(x1 - x0)/(t1 - t0) - f~((x0 + x1)/2)| relative to |f~|, f~ the extended field."""
    f = tilde_rhs(C, omega)
    x0, x1 = np.asarray(x0, dtype=complex), np.asarray(x1, dtype=complex)
    slope = (x1 - x0) / (t1 - t0)
    field_mid = f(0.5 * (t0 + t1), 0.5 * (x0 + x1))
    return float(np.max(np.abs(slope - field_mid)) / (np.max(np.abs(field_mid)) + 1e-300))


def solve_tilde(P: ParameterSet, omega: float, x0: Tuple[complex, complex],
                ts: Sequence[float]) -> TildeTrajectory:
    """x~(t) = exp(i omega t) x(tau(t)) through the closed-form solver.

    Each sample is paired with a point FD_STEP/|omega| later (or a quarter of
    the gap to the next sample) and the extended equation is checked on that
    short interval.
    """
    ts = [float(t) for t in ts]
    if not ts or ts[0] != 0:
        raise ValidationError("time grid must start at 0")
    if any(b <= a for a, b in zip(ts[:-1], ts[1:])):
        raise ValidationError("time grid must be increasing")
    steps = []
    for k, t in enumerate(ts):
        h = FD_STEP / abs(omega)
        if k + 1 < len(ts):
            h = min(h, (ts[k + 1] - t) / 4)
        steps.append(h)
    grid = sorted(ts + [t + h for t, h in zip(ts, steps)])
    taus, index = _refine(omega, grid)
    traj = solve_ivp(IvpSpec(P, x0, taus))
    if traj.truncated:
        raise PathSingularError("the tau path meets a singularity of the base solution",
                                traj.singularity or {})
    at = {t: cmath.exp(1j * omega * t) * traj.states[i] for t, i in zip(grid, index)}
    states = np.array([at[t] for t in ts], dtype=complex)
    C = forward(P)
    residuals = [tilde_residual(C, omega, t, at[t], t + h, at[t + h]) for t, h in zip(ts, steps)]
    tau_at = dict(zip(grid, (taus[i] for i in index)))
    return TildeTrajectory(ts, [tau_at[t] for t in ts], states, residuals)


def _defect(x: np.ndarray, x0: np.ndarray) -> float:
    return float(np.linalg.norm(x - x0) / max(float(np.linalg.norm(x0)), 1e-300))


def detect_period(C: CoefficientSet, omega: float, x0: Tuple[complex, complex],
                  k_max: int = K_MAX, eps: float = PERIOD_EPS,
                  rtol: float = RTOL, atol: float = ATOL) -> PeriodReport:
    """Smallest k <= k_max with |x~(k T~) - x~(0)| < eps |x~(0)|, by RK on the extended system."""
    if k_max < 1:
        raise ValidationError("k_max must be >= 1", {"k_max": k_max})
    system = IsochronousSystem(C, omega)
    x = np.array(x0, dtype=complex)
    start = x.copy()
    rationality = _lambda_rationality(C)
    if not np.any(x):
        return PeriodReport(1, [0.0], rationality, system.T_tilde)

    f = system.rhs()
    stats = StepStats()
    defects: List[float] = []
    for k in range(1, k_max + 1):
        try:
            x = advance(f, (k - 1) * system.T_tilde, k * system.T_tilde, x, rtol, atol, stats)
        except BlowUpError as e:
            if k == 1:
                raise SingularTrajectoryError("blow-up before the first period",
                                              {"t": [complex(e.t_star).real, complex(e.t_star).imag]})
            logger.warning(f"blow-up during period {k}, no period detected")
            break
        defects.append(_defect(x, start))
        if defects[-1] < eps:
            logger.info(f"period {k} x T~ detected (defect {defects[-1]:.2e})")
            return PeriodReport(k, defects, rationality, system.T_tilde)
    return PeriodReport(None, defects, rationality, system.T_tilde)


def _lambda_rationality(C: CoefficientSet) -> Optional[RationalityReport]:
    from scripts.inversion.invert import invert
    try:
        P = invert(C).parameters
    except CubicFlowError as e:
        logger.debug(f"no decomposition for the rationality check: {e.message}")
        return None
    return rationality_check(spectral(*P.gamma))


def continued_fraction_coeffs(x: float, eps: float = CF_EPS) -> Generator[int, None, None]:
    """Euclidean algorithm on a real number."""
    while True:
        n, rem = divmod(x, 1)
        yield int(n)
        if abs(rem) < eps:
            break
        x = 1 / rem


def continuants(coeffs: Iterator[int]) -> Generator[Tuple[int, int], None, None]:
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in coeffs:
        p_prev, p = a * p_prev + p, p_prev
        q_prev, q = a * q_prev + q, q_prev
        yield p_prev, q_prev


def best_fraction(x: float, max_denominator: int = MAX_DENOMINATOR,
                  tol: float = RATIONAL_TOL) -> Optional[Tuple[int, int]]:
    """First continuant within tol of x, or None if the denominator grows too large."""
    for p, q in continuants(continued_fraction_coeffs(x)):
        if q > max_denominator:
            return None
        if abs(p / q - x) < tol:
            return (p, q)
    return None


def rationality_check(S: SpectralData, max_denominator: int = MAX_DENOMINATOR,
                      tol: float = RATIONAL_TOL) -> RationalityReport:
    """Whether every lambda_j is a real rational N_j/M_j with M_j <= max_denominator."""
    if S.degenerate or S.lambdas is None:
        return RationalityReport(False)
    fractions = []
    for lam in S.lambdas:
        lam = complex(lam)
        if abs(lam.imag) > tol:
            return RationalityReport(False)
        frac = best_fraction(lam.real, max_denominator, tol)
        if frac is None:
            return RationalityReport(False)
        fractions.append(frac)
    return RationalityReport(True, fractions, math.lcm(*(q for _, q in fractions)))


def circle_closure(C: CoefficientSet, omega: float, x0: Tuple[complex, complex],
                 samples: int = 256) -> OdeSolution:
    """Integrate the base system once around the tau circle; a nonzero closure defect means a branch point inside."""
    system = IsochronousSystem(C, omega)
    problem = OdeProblem(rhs=rhs_vector(C), x0=x0, times=[0.0], rtol=RTOL, atol=ATOL)
    return integrate_circle(problem, system.radius, system.center, samples,
                            clockwise=omega < 0)


def scan_sheet_count(C: CoefficientSet, omega: float, direction: Tuple[complex, complex],
                     magnitudes: Sequence[float], k_max: int = K_MAX,
                     eps: float = PERIOD_EPS) -> List[Tuple[float, Optional[int]]]:
    """Observed period multiple k for x0 = m * direction over the given magnitudes."""
    out = []
    d = np.array(direction, dtype=complex)
    for m in magnitudes:
        try:
            k = detect_period(C, omega, tuple(m * d), k_max, eps).k
        except SingularTrajectoryError:
            k = None
        logger.info(f"magnitude {m:g}: k = {k}")
        out.append((float(m), k))
    return out
