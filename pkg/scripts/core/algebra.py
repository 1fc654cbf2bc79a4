"""
Complex scalar utilities: quadratic and cubic solvers plus branch-aware powers.

Every other module goes through these helpers, so root ordering here is what
makes spectral data and inversion branches reproducible between runs.

Usage:
  from scripts.core.algebra import solve_cubic, tracked_power
  roots = solve_cubic(-6, 11, -6).roots   # (1, 2, 3)
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from scripts.core.errors import DomainError, ValidationError

ComplexScalar = complex

DISCRIMINANT_THRESHOLD = 1e-9
POLISH_ITERATIONS = 2
ORDER_DIGITS = 9

_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)


@dataclass(frozen=True)
class CubicRoots:
    roots: Tuple[complex, complex, complex]
    discriminant_magnitude: float

    @property
    def near_degenerate(self) -> bool:
        return self.discriminant_magnitude < DISCRIMINANT_THRESHOLD


def is_finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def as_complex(value, name: str = "value") -> complex:
    """Coerce to complex and reject NaN/Inf."""
    try:
        z = complex(value)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} is not a number: {value!r}") from e
    if not is_finite(z):
        raise ValidationError(f"{name} is not finite: {value!r}")
    return z


def ordered(values: Iterable[complex]) -> List[complex]:
    """Lexicographic order by real then imaginary part, blind to roundoff in re."""
    return sorted(values, key=lambda z: (round(z.real, ORDER_DIGITS), z.imag))


def principal_cbrt(z: complex) -> complex:
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3.0)


def cube_roots(z: complex) -> List[complex]:
    r = principal_cbrt(z)
    return [r, r * _OMEGA, r * _OMEGA * _OMEGA]


def solve_quadratic(p1: complex, p0: complex) -> Tuple[complex, complex]:
    """Roots of u^2 + p1*u + p0, computed without cancellation."""
    p1 = as_complex(p1, "p1")
    p0 = as_complex(p0, "p0")
    disc = cmath.sqrt(p1 * p1 - 4.0 * p0)
    if abs(p1 + disc) < abs(p1 - disc):
        disc = -disc
    q = -(p1 + disc) / 2.0
    if q == 0:
        return (0j, 0j)
    r1, r2 = ordered([q, p0 / q])
    return (r1, r2)


def _cubic_value(u: complex, p2: complex, p1: complex, p0: complex) -> complex:
    return ((u + p2) * u + p1) * u + p0


def _polish(u: complex, p2: complex, p1: complex, p0: complex) -> complex:
    for _ in range(POLISH_ITERATIONS):
        f = _cubic_value(u, p2, p1, p0)
        df = (3.0 * u + 2.0 * p2) * u + p1
        if f == 0 or df == 0:
            break
        candidate = u - f / df
        # near a double root Newton can overshoot; keep only improvements
        if abs(_cubic_value(candidate, p2, p1, p0)) < abs(f):
            u = candidate
        else:
            break
    return u


def solve_cubic(p2: complex, p1: complex, p0: complex) -> CubicRoots:
    """Roots of the monic cubic u^3 + p2*u^2 + p1*u + p0.

    Cardano on the depressed cubic, followed by a Newton polish of each root.
    Roots come back in lexicographic order (real part, then imaginary part).
    """
    p2 = as_complex(p2, "p2")
    p1 = as_complex(p1, "p1")
    p0 = as_complex(p0, "p0")

    shift = p2 / 3.0
    p = p1 - p2 * p2 / 3.0
    q = 2.0 * p2 ** 3 / 27.0 - p2 * p1 / 3.0 + p0
    s = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    base = -q / 2.0 + s
    if abs(-q / 2.0 - s) > abs(base):
        base = -q / 2.0 - s

    if base == 0:
        depressed = [0j, 0j, 0j]
    else:
        depressed = [r - p / (3.0 * r) for r in cube_roots(base)]

    roots = ordered(_polish(z - shift, p2, p1, p0) for z in depressed)

    scale = 1.0 + max(abs(r) for r in roots)
    disc = 1.0
    for i in range(3):
        for j in range(i + 1, 3):
            disc *= abs(roots[i] - roots[j]) ** 2
    return CubicRoots(roots=(roots[0], roots[1], roots[2]),
                      discriminant_magnitude=disc / scale ** 6)


def tracked_power(base: complex, exponent: complex, winding: int) -> complex:
    """base**exponent on the sheet reached after ``winding`` extra turns of the log."""
    base = complex(base)
    if base == 0:
        raise DomainError("tracked_power of zero base", {"exponent": str(exponent)})
    return cmath.exp(exponent * (cmath.log(base) + 2j * math.pi * winding))


def winding_increment(previous: complex, current: complex) -> int:
    """Change of winding when a value moves from ``previous`` to ``current``.

    +1 when the path crosses the negative real axis from above, -1 from below.
    Valid while the phase moves by less than pi between the two values.
    """
    delta = cmath.phase(current) - cmath.phase(previous)
    if delta > math.pi:
        return -1
    if delta < -math.pi:
        return 1
    return 0
