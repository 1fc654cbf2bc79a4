"""
Constraint avatars of the solvability manifold and their residuals.

The eight coefficients of a solvable system obey two independent polynomial
constraints. The first has three equivalent avatars (cross-multiplied
agreement of the three rational expressions of alpha = a2/a1) and a degree-5
variant; the second is a single degree-4 relation. Residuals are divided by
scale**degree so that rescaling the coefficients leaves them unchanged.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, asdict
from typing import Dict, Optional, Tuple

from scripts.core.model import CoefficientSet

SATISFIED_TOL = 1e-9


@dataclass(frozen=True)
class ConstraintReport:
    residual_32a: float
    residual_32b: float
    residual_32c: float
    residual_cross: float
    residual_second: float
    satisfied: bool

    @property
    def worst(self) -> float:
        return max(self.residual_32a, self.residual_32b, self.residual_32c,
                   self.residual_cross, self.residual_second)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class Radicals:
    R1: complex
    R2: complex
    R3: complex
    R4: complex
    G1: Optional[complex] = None
    G2: Optional[complex] = None
    G_ratio: Optional[complex] = None


def alpha_parts(C: CoefficientSet) -> Tuple[Tuple[complex, complex], ...]:
    """(numerator, denominator) of the three rational expressions of alpha."""
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    na = c12 * c22 - 3 * c13 * c21
    da = 3 * (c11 * c22 - c12 * c21 + c21 * c23) - c22 ** 2
    nb = c13 * c23 - 3 * c14 * c22
    db = c12 * c23 - c13 * c22 - c23 ** 2 + 3 * c22 * c24
    nc = c12 * c23 - 9 * c14 * c21
    dc = 3 * (c11 * c23 - c13 * c21) + 9 * c21 * c24 - c22 * c23
    return ((na, da), (nb, db), (nc, dc))


def first_constraint_values(C: CoefficientSet) -> Tuple[complex, complex, complex]:
    """Raw (unnormalized) LHS - RHS of the three first-constraint avatars."""
    (na, da), (nb, db), (nc, dc) = alpha_parts(C)
    return (na * db - nb * da, nb * dc - nc * db, nc * da - na * dc)


def cross_constraint_value(C: CoefficientSet) -> complex:
    """Degree-5 avatar of the first constraint."""
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    lhs = (c14 * (c11 * c23 - c13 * c21) * (c12 * c22 - 3 * c13 * c21)
           + c21 * (c14 * c22 - c12 * c24) * (c13 * c23 - 3 * c14 * c22))
    rhs = (c12 * c23 - 9 * c14 * c21) * (c14 * (c11 * c22 - c12 * c21)
                                         + c21 * (c14 * c23 - c13 * c24))
    return lhs - rhs


def second_constraint_value(C: CoefficientSet) -> complex:
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    left = c12 * (c13 - 3 * c24) + 3 * c14 * (c22 - 3 * c11)
    right = 3 * c21 * (c13 - 3 * c24) + c23 * (c22 - 3 * c11)
    return left * right - (c12 * c23 - 9 * c14 * c21) ** 2


def constraint_residuals(C: CoefficientSet, tol: float = SATISFIED_TOL) -> ConstraintReport:
    s = C.scale
    if s == 0:
        return ConstraintReport(0.0, 0.0, 0.0, 0.0, 0.0, True)
    a, b, c = (abs(v) / s ** 4 for v in first_constraint_values(C))
    cross = abs(cross_constraint_value(C)) / s ** 5
    second = abs(second_constraint_value(C)) / s ** 4
    ok = max(a, b, c, cross, second) < tol
    return ConstraintReport(a, b, c, cross, second, ok)


def radicals(C: CoefficientSet) -> Radicals:
    c11, c12, c13, c14, c21, c22, c23, c24 = C.values()
    R1 = cmath.sqrt((c13 - 3 * c24) ** 2 + 12 * c14 * c23)
    R2 = cmath.sqrt((3 * c11 - c22) ** 2 + 12 * c12 * c21)
    R3 = cmath.sqrt(
        (c11 ** 2 * (9 * c14 * c21 + c13 * c22 - 3 * c22 * c24) + (c13 * c21) ** 2) ** 2
        - 4 * c11 ** 2 * c13 * c21 * (9 * c13 * c14 * c21 ** 2 + 9 * c11 ** 2 * c14 * c22
                                      + c13 ** 2 * c21 * c22 - 3 * c11 * c14 * c22 ** 2
                                      - 9 * c11 * c13 * c21 * c24))
    R4 = cmath.sqrt((c12 - c23) ** 2 + 4 * c13 * c22)
    if c14 == 0 and c21 == 0:
        # local import: reduced depends on this module
        from scripts.reduced.system import from_full, reduced_radicals
        rr = reduced_radicals(from_full(C))
        return Radicals(R1, R2, R3, R4, rr.G1, rr.G2, rr.G_ratio)
    return Radicals(R1, R2, R3, R4)
