"""
Single-coefficient solutions of the two constraints.

``appendix_a_solve`` expresses one coefficient through the other seven using
the first constraint, ``appendix_b_solve`` does the same with the second one.
Only c11..c14 have explicit formulas; c21..c24 follow by applying them to the
swapped system (x1 <-> x2).
"""
from __future__ import annotations

import cmath
import logging
from typing import Callable, Dict, List

from scripts.constraints.residuals import first_constraint_values, second_constraint_value
from scripts.core.algebra import ordered, solve_quadratic
from scripts.core.errors import FormulaInapplicableError, ValidationError
from scripts.core.model import COEFF_NAMES, SWAP, CoefficientSet, swap_symmetry

logger = logging.getLogger(__name__)

VANISHING = 1e-12
DEDUP_TOL = 1e-8


def _vanishes(value: complex, scale: float, degree: int) -> bool:
    return abs(value) < VANISHING * max(scale, 1e-300) ** degree


def _require(value: complex, C: CoefficientSet, degree: int, label: str) -> None:
    if _vanishes(value, C.scale, degree):
        raise FormulaInapplicableError(f"{label}: denominator vanishes",
                                       {"formula": label})


def _a_c11(C: CoefficientSet) -> List[complex]:
    _, c12, c13, c14, c21, c22, c23, c24 = C.values()
    num = (-3 * c13 ** 2 * c21 - c12 ** 2 * c23 + 3 * c14 * (c22 ** 2 - 3 * c21 * c23)
           + c13 * (c22 * (c12 - c23) + 9 * c21 * c24)
           + c12 * (9 * c14 * c21 + c23 ** 2 - 3 * c22 * c24))
    den = 3 * (3 * c14 * c22 - c13 * c23)
    _require(den, C, 2, "A1")
    return [num / den]


def _a_c12(C: CoefficientSet) -> List[complex]:
    c11, _, c13, c14, c21, c22, c23, c24 = C.values()
    P = 9 * c14 * c21 + c13 * c22 + c23 ** 2 - 3 * c22 * c24
    Q = (3 * c13 ** 2 * c21 + 9 * c11 * c14 * c22 - 3 * c14 * c22 ** 2 + 9 * c14 * c21 * c23
         + c13 * (-3 * c11 * c23 + c22 * c23 - 9 * c21 * c24))
    _require(c23, C, 1, "A2")
    # c23 x^2 - P x + Q = 0
    return list(solve_quadratic(-P / c23, Q / c23))


def _a_c13(C: CoefficientSet) -> List[complex]:
    c11, c12, _, c14, c21, c22, c23, c24 = C.values()
    S = 9 * c21 * c24 + c12 * c22 + 3 * c11 * c23 - c22 * c23
    U = (3 * c22 ** 2 * c14 - 9 * c11 * c14 * c22 + c12 * c23 ** 2 - 3 * c12 * c22 * c24
         + 9 * c12 * c14 * c21 - c12 ** 2 * c23 - 9 * c14 * c21 * c23)
    _require(c21, C, 1, "A3")
    # 3 c21 x^2 - S x - U = 0
    return list(solve_quadratic(-S / (3 * c21), -U / (3 * c21)))


def _a_c14(C: CoefficientSet) -> List[complex]:
    c11, c12, c13, _, c21, c22, c23, c24 = C.values()
    num = (-3 * c13 ** 2 * c21 - c12 * (c12 * c23 + 3 * c22 * c24 - c23 ** 2)
           + c13 * (c12 * c22 + 3 * c11 * c23 - c22 * c23 + 9 * c21 * c24))
    den = 3 * (3 * (c11 * c22 - c12 * c21) + 3 * c21 * c23 - c22 ** 2)
    _require(den, C, 2, "A4")
    return [num / den]


def _b_c11(C: CoefficientSet) -> List[complex]:
    _, c12, c13, c14, c21, c22, c23, c24 = C.values()
    den = 18 * c14 * c23
    _require(den, C, 2, "BBc11")
    R1 = cmath.sqrt((c13 - 3 * c24) ** 2 + 12 * c14 * c23)
    base = 6 * c14 * c22 * c23 + (c12 * c23 + 9 * c14 * c21) * (c13 - 3 * c24)
    k = c12 * c23 - 9 * c14 * c21
    return [(base + k * r) / den for r in (R1, -R1)]


def _b_c12(C: CoefficientSet) -> List[complex]:
    c11, _, c13, c14, c21, c22, c23, c24 = C.values()
    den = 2 * c23 ** 2
    _require(den, C, 2, "BBc12")
    R1 = cmath.sqrt((c13 - 3 * c24) ** 2 + 12 * c14 * c23)
    e = 3 * c11 - c22
    base = (3 * c13 ** 2 * c21 + 18 * c21 * (c14 * c23 - c13 * c24) - c13 * c23 * e
            + 3 * c24 * (c23 * e + 9 * c21 * c24))
    k = c23 * e - 3 * c13 * c21 + 9 * c21 * c24
    return [(base + k * r) / den for r in (R1, -R1)]


def _b_c13(C: CoefficientSet) -> List[complex]:
    c11, c12, _, c14, c21, c22, c23, c24 = C.values()
    den = 6 * c12 * c21
    _require(den, C, 2, "BBc13")
    R2 = cmath.sqrt((3 * c11 - c22) ** 2 + 12 * c12 * c21)
    base = c12 * c23 * (3 * c11 - c22) + 9 * c21 * (3 * c11 * c14 - c14 * c22 + 2 * c12 * c24)
    k = c12 * c23 - 9 * c14 * c21
    return [(base + k * r) / den for r in (R2, -R2)]


def _b_c14(C: CoefficientSet) -> List[complex]:
    c11, c12, c13, _, c21, c22, c23, c24 = C.values()
    den = 54 * c21 ** 2
    _require(den, C, 2, "BBc14")
    e = 3 * c11 - c22
    R2 = cmath.sqrt(e ** 2 + 12 * c12 * c21)
    base = -3 * e * (c13 * c21 - 3 * c21 * c24) + c23 * (e ** 2 + 6 * c12 * c21)
    k = 3 * c21 * (c13 - 3 * c24) - c23 * e
    return [(base + k * r) / den for r in (R2, -R2)]


_A_FORMULAS: Dict[str, Callable[[CoefficientSet], List[complex]]] = {
    "c11": _a_c11, "c12": _a_c12, "c13": _a_c13, "c14": _a_c14,
}
_B_FORMULAS: Dict[str, Callable[[CoefficientSet], List[complex]]] = {
    "c11": _b_c11, "c12": _b_c12, "c13": _b_c13, "c14": _b_c14,
}


def _residual(C: CoefficientSet, which: str, value: complex, table) -> float:
    trial = C.replace(**{which: value})
    if table is _A_FORMULAS:
        raw = max(abs(v) for v in first_constraint_values(trial))
    else:
        raw = abs(second_constraint_value(trial))
    return raw / max(trial.scale, 1e-300) ** 4


def _dedup(C: CoefficientSet, which: str, values: List[complex], table) -> List[complex]:
    """Distinct values, best constraint residual first."""
    tol = DEDUP_TOL * max(C.scale, 1.0)
    kept: List[complex] = []
    for v in values:
        if all(abs(v - k) > tol for k in kept):
            kept.append(v)
    scored = [(_residual(C, which, v, table), v) for v in ordered(kept)]
    scored.sort(key=lambda item: item[0])
    if len(kept) < len(values):
        logger.debug(f"{which}: {len(values) - len(kept)} coincident value(s) merged")
    return [v for _, v in scored]


def _solve(C: CoefficientSet, which: str, table) -> List[complex]:
    if which not in COEFF_NAMES:
        raise ValidationError(f"unknown coefficient {which!r}")
    if which in table:
        values = table[which](C)
    else:
        values = table[SWAP[which]](swap_symmetry(C))
    return _dedup(C, which, values, table)


def appendix_a_solve(C: CoefficientSet, which: str) -> List[complex]:
    """Values of coefficient ``which`` allowed by the first constraint.

    The current value of ``which`` in C is ignored.
    """
    return _solve(C, which, _A_FORMULAS)


def appendix_b_solve(C: CoefficientSet, which: str) -> List[complex]:
    """Values of coefficient ``which`` allowed by the second constraint (both radical signs)."""
    return _solve(C, which, _B_FORMULAS)
