"""
Inversion of the forward map: from eight coefficients back to
(a1, a2, b1, b2, gamma1, gamma2, gamma3).

Pipeline: alpha = a2/a1, then a1 and a2, then b on a normalization slice,
then gamma from the four K relations. Every decomposition found is pushed
through the forward map again and the best reproducing one is kept.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from scripts.constraints.residuals import alpha_parts, constraint_residuals
from scripts.core.algebra import ordered, solve_cubic, solve_quadratic
from scripts.core.errors import (ConstraintError, CubicFlowError, InversionError,
                                 NumericalError)
from scripts.core.model import CoefficientSet, ParameterSet, forward, spectral

logger = logging.getLogger(__name__)

DETERMINATE = 1e-10
ALPHA_SPREAD = 1e-8
QUADRATIC_TOL = 1e-8
CROSS_CHECK_TOL = 1e-7
GAMMA_RESIDUAL_TOL = 1e-7
FORWARD_TOL = 1e-8


@dataclass(frozen=True)
class GammaFit:
    gamma: Tuple[complex, complex, complex]
    triad: Tuple[int, int, int]
    triad_spread: float
    residual: float


@dataclass
class InversionResult:
    parameters: ParameterSet
    alpha: complex
    beta_candidates: List[complex]
    triad_spread: float
    residual_33KK: float
    forward_error: float
    slice: str = "b1=1"
    diagnostics: Dict[str, object] = field(default_factory=dict)


def _quadratics(C: CoefficientSet) -> List[Tuple[complex, complex, complex]]:
    """(q2, q1, q0) of the three quadratics in alpha implied by the linear identities."""
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    return [
        (3 * c21, 3 * c11 - c22, -c12),
        (c22, c12 - c23, -c13),
        (c23, c13 - 3 * c24, -3 * c14),
    ]


def _quadratic_roots(q: Tuple[complex, complex, complex], scale: float) -> List[complex]:
    q2, q1, q0 = q
    if abs(q2) > DETERMINATE * scale:
        return list(solve_quadratic(q1 / q2, q0 / q2))
    if abs(q1) > DETERMINATE * scale:
        return [-q0 / q1]
    return []


def alpha_candidates(C: CoefficientSet) -> List[complex]:
    """Every admissible value of alpha = a2/a1 for C.

    The three rational expressions give a single value when at least one is
    determinate. Otherwise the common roots of the three quadratics are returned.
    """
    s = C.scale
    values = [n / d for n, d in alpha_parts(C) if abs(d) > DETERMINATE * s ** 2]
    if values:
        spread = max(abs(v - w) for v in values for w in values)
        if spread < ALPHA_SPREAD * max(1.0, max(abs(v) for v in values)):
            return [sum(values) / len(values)]
        logger.warning(f"rational alpha expressions disagree (spread {spread:.3g}), "
                       f"falling back to the quadratics")
    else:
        logger.warning("all alpha expressions are 0/0, using the quadratics")

    quads = [q for q in _quadratics(C) if max(abs(v) for v in q) > DETERMINATE * s]
    if not quads:
        raise InversionError("alpha is undetermined: all quadratics vanish")
    out: List[complex] = []
    for alpha in _quadratic_roots(quads[0], s):
        ok = all(abs((q2 * alpha + q1) * alpha + q0) < QUADRATIC_TOL * s * (1 + abs(alpha)) ** 2
                 for q2, q1, q0 in quads[1:])
        if ok and all(abs(alpha - a) > ALPHA_SPREAD * (1 + abs(a)) for a in out):
            out.append(alpha)
    if not out:
        raise InversionError("no common root of the alpha quadratics",
                             {"quadratics": [[str(v) for v in q] for q in quads]})
    return ordered(out)


def alpha_of(C: CoefficientSet) -> complex:
    return alpha_candidates(C)[0]


def squares_cross_check(C: CoefficientSet) -> Optional[Tuple[complex, complex]]:
    """(a1^2, a2^2) from the coefficients alone, or None when c12 c23 = 9 c14 c21."""
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    den = c12 * c23 - 9 * c14 * c21
    if abs(den) <= DETERMINATE * C.scale ** 2:
        return None
    A1 = (c12 * (c11 * c23 - c13 * c21) - 3 * c21 * (c14 * c22 - c12 * c24)) / den
    A2 = (3 * c14 * (c11 * c23 - c13 * c21) - c23 * (c14 * c22 - c12 * c24)) / den
    return (A1, A2)


def a_of(C: CoefficientSet, alpha: complex) -> Tuple[complex, complex]:
    """(a1, a2) with a1 the principal square root of c11 + alpha c21."""
    s = C.scale
    a1_sq = C.c11 + alpha * C.c21
    if abs(a1_sq) <= DETERMINATE * s:
        raise InversionError("a1^2 = c11 + alpha c21 vanishes", {"alpha": str(alpha)})
    a1 = complex(np.sqrt(a1_sq))
    den = 3 * a1_sq - C.c22
    if abs(den) > DETERMINATE * s:
        a2 = a1 * C.c12 / den
    else:
        a2 = alpha * a1
    check = squares_cross_check(C)
    if check is not None:
        A1, A2 = check
        bad = [abs(a1 * a1 - A1) / max(abs(A1), 1e-300), abs(a2 * a2 - A2) / max(abs(A2), 1e-300)]
        if max(bad) > CROSS_CHECK_TOL:
            raise InversionError("a^2 disagrees with the closed-form squares",
                                 {"relative_mismatch": bad, "alpha": str(alpha)})
    return (a1, a2)


def _ab_brackets(C: CoefficientSet, a1: complex, a2: complex) -> Tuple[complex, complex]:
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    A = a1 ** 3 * c24 - a2 ** 3 * c21 - a1 * a2 * (a1 * c23 - a2 * c22)
    B = a1 ** 3 * c14 - a2 ** 3 * c11 - a1 * a2 * (a1 * c13 - a2 * c12)
    return (A, B)


def b_of(C: CoefficientSet, a1: complex, a2: complex, slice_: str = "b1") -> List[Tuple[complex, complex]]:
    """Solutions of (a1 b2 - a2 b1)^3 = b2 A + b1 B on the slice b1 = 1 (or b2 = 1)."""
    if a1 == 0 or a2 == 0:
        raise InversionError("a1 and a2 must not vanish")
    A, B = _ab_brackets(C, a1, a2)
    if slice_ == "b1":
        roots = solve_cubic(-3 * a2 / a1, (3 * a1 * a2 ** 2 - A) / a1 ** 3,
                            -(a2 ** 3 + B) / a1 ** 3).roots
        pairs = [(1 + 0j, r) for r in roots]
    elif slice_ == "b2":
        roots = solve_cubic(-3 * a1 / a2, (3 * a1 ** 2 * a2 + B) / a2 ** 3,
                            -(a1 ** 3 - A) / a2 ** 3).roots
        pairs = [(r, 1 + 0j) for r in roots]
    else:
        raise ValueError(f"unknown slice {slice_!r}")
    scale = abs(a1) + abs(a2)
    out = [(b1, b2) for b1, b2 in pairs
           if b1 != 0 and b2 != 0 and abs(a1 * b2 - a2 * b1) > 1e-12 * scale * (abs(b1) + abs(b2))]
    if not out:
        raise InversionError("every b root gives c = 0", {"slice": slice_})
    return out


def _gamma_system(C: CoefficientSet, a1, a2, b1, b2) -> Tuple[np.ndarray, np.ndarray]:
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    M = np.array([
        [a1 * b1 ** 2, a1 ** 2 * b1, a1 ** 3],
        [a2 * b1 ** 2 + 2 * a1 * b1 * b2, a1 ** 2 * b2 + 2 * a1 * a2 * b1, 3 * a1 ** 2 * a2],
        [a1 * b2 ** 2 + 2 * a2 * b1 * b2, a2 ** 2 * b1 + 2 * a1 * a2 * b2, 3 * a1 * a2 ** 2],
        [a2 * b2 ** 2, a2 ** 2 * b2, a2 ** 3],
    ], dtype=complex)
    rhs = np.array([
        b1 * c11 + b2 * c21 - b1 ** 3,
        b1 * c12 + b2 * c22 - 3 * b1 ** 2 * b2,
        b1 * c13 + b2 * c23 - 3 * b1 * b2 ** 2,
        b1 * c14 + b2 * c24 - b2 ** 3,
    ], dtype=complex)
    return M, rhs


def _kk_residual(M: np.ndarray, rhs: np.ndarray, gamma: np.ndarray) -> float:
    terms = np.abs(M) @ np.abs(gamma) + np.abs(rhs)
    scale = max(float(np.max(terms)), 1e-300)
    return float(np.max(np.abs(M @ gamma - rhs))) / scale


def gamma_of(C: CoefficientSet, a1, a2, b1, b2) -> GammaFit:
    """gamma from each of the four triads of K relations; the best-fitting triad wins."""
    if a1 * b2 - a2 * b1 == 0:
        raise InversionError("c = a1 b2 - a2 b1 vanishes")
    M, rhs = _gamma_system(C, a1, a2, b1, b2)
    fits = []
    for rows in itertools.combinations(range(4), 3):
        try:
            g = np.linalg.solve(M[list(rows)], rhs[list(rows)])
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(g)):
            continue
        fits.append((rows, g, _kk_residual(M, rhs, g)))
    if not fits:
        raise InversionError("every gamma triad is singular")
    spread = max(float(np.max(np.abs(g - h))) for (_, g, _), (_, h, _) in itertools.product(fits, fits))
    spread /= 1.0 + max(float(np.max(np.abs(g))) for _, g, _ in fits)
    rows, g, res = min(fits, key=lambda f: f[2])
    if res > GAMMA_RESIDUAL_TOL:
        raise InversionError("no gamma triad satisfies all K relations",
                             {"residual": res, "b": [str(b1), str(b2)]})
    return GammaFit((complex(g[0]), complex(g[1]), complex(g[2])), rows, spread, res)


AChoice = Tuple[complex, complex, complex]


def _a_choices(C: CoefficientSet, tried: List[Dict[str, object]]) -> List[AChoice]:
    out = []
    for alpha in alpha_candidates(C):
        try:
            a1, a2 = a_of(C, alpha)
        except NumericalError as e:
            tried.append({"alpha": str(alpha), "error": e.message})
            continue
        out.append((alpha, a1, a2))
    return out


def _candidates(C: CoefficientSet, a_choices: List[AChoice], slice_: str,
                tried: List[Dict[str, object]]):
    for alpha, a1, a2 in a_choices:
        try:
            bs = b_of(C, a1, a2, slice_)
        except NumericalError as e:
            tried.append({"alpha": str(alpha), "slice": slice_, "error": e.message})
            continue
        betas = [b2 / b1 for b1, b2 in bs]
        for b1, b2 in bs:
            try:
                fit = gamma_of(C, a1, a2, b1, b2)
                P = ParameterSet(a1, a2, b1, b2, *fit.gamma)
                err = forward(P).distance(C) / C.scale
            except CubicFlowError as e:
                tried.append({"alpha": str(alpha), "b": [str(b1), str(b2)], "error": e.message})
                continue
            tried.append({"alpha": str(alpha), "b": [str(b1), str(b2)], "forward_error": err})
            yield InversionResult(P, alpha, betas, fit.triad_spread, fit.residual, err, f"{slice_}=1")


def decompose(C: CoefficientSet, a_choices: List[AChoice],
              tried: Optional[List[Dict[str, object]]] = None) -> InversionResult:
    """Best decomposition of C for the given (alpha, a1, a2) choices.

    The b1 = 1 slice is tried first and the b2 = 1 slice only when it yields
    nothing. Non-degenerate spectral data is preferred, then the smallest
    forward error.
    """
    tried = [] if tried is None else tried
    found = [r for r in _candidates(C, a_choices, "b1", tried) if r.forward_error < FORWARD_TOL]
    if not found:
        logger.warning("b1 = 1 slice gave no decomposition, trying b2 = 1")
        found = [r for r in _candidates(C, a_choices, "b2", tried) if r.forward_error < FORWARD_TOL]
    if not found:
        raise InversionError("no decomposition reproduces the coefficients", {"tried": tried})

    def key(r: InversionResult):
        p = r.parameters
        return (spectral(*p.gamma).degenerate, r.forward_error,
                round(p.b2.real, 9), p.b2.imag)

    best = min(found, key=key)
    best.diagnostics = {"candidates": len(found), "tried": tried}
    logger.info(f"inverted with alpha = {best.alpha:.6g}, forward error {best.forward_error:.2e}")
    return best


def invert(C: CoefficientSet) -> InversionResult:
    """Parameters reproducing C through the forward map."""
    report = constraint_residuals(C)
    if not report.satisfied:
        raise ConstraintError("coefficients violate the solvability constraints", report.to_dict())
    tried: List[Dict[str, object]] = []
    return decompose(C, _a_choices(C, tried), tried)
