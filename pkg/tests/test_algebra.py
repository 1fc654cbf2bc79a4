from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from scripts.core.algebra import (cube_roots, ordered, principal_cbrt, solve_cubic,
                                  solve_quadratic, tracked_power, winding_increment, as_complex)
from scripts.core.errors import DomainError, ValidationError


def test_solve_cubic_integer_roots():
    roots = solve_cubic(-6, 11, -6).roots
    np.testing.assert_allclose(roots, [1, 2, 3], atol=1e-12)


def test_solve_cubic_random_complex(rng):
    for _ in range(200):
        p2, p1, p0 = rng.normal(size=3) + 1j * rng.normal(size=3)
        for u in solve_cubic(p2, p1, p0).roots:
            value = ((u + p2) * u + p1) * u + p0
            assert abs(value) < 1e-9 * (1 + abs(u)) ** 3


def test_solve_cubic_flags_double_root():
    # (u - 1)^2 (u - 2)
    result = solve_cubic(-4, 5, -2)
    assert result.near_degenerate
    assert min(abs(r - 2) for r in result.roots) < 1e-9


def test_solve_quadratic():
    assert solve_quadratic(-3, 2) == pytest.approx((1, 2))
    r1, r2 = solve_quadratic(0, 1)
    assert {round(r1.imag), round(r2.imag)} == {-1, 1}


def test_cube_roots_cube_back():
    for r in cube_roots(8):
        assert abs(r ** 3 - 8) < 1e-12
    assert principal_cbrt(8) == pytest.approx(2)
    assert principal_cbrt(0) == 0


def test_ordered_is_lexicographic():
    assert ordered([2, 1 + 1j, 1 - 1j]) == [1 - 1j, 1 + 1j, 2]


def test_tracked_power_sheets():
    assert tracked_power(4, 0.5, 0) == pytest.approx(2)
    assert tracked_power(4, 0.5, 1) == pytest.approx(-2)
    with pytest.raises(DomainError):
        tracked_power(0, 0.5, 0)


def test_winding_increment_crossing_negative_axis():
    assert winding_increment(-1 + 0.1j, -1 - 0.1j) == 1
    assert winding_increment(-1 - 0.1j, -1 + 0.1j) == -1
    assert winding_increment(1 + 0.1j, 1 - 0.1j) == 0


def test_winding_follows_sqrt_around_origin():
    n = 64
    winding = 0
    prev = 1 + 0j
    for k in range(1, n + 1):
        z = cmath.exp(2j * math.pi * k / n)
        winding += winding_increment(prev, z)
        prev = z
    assert winding == 1
    assert tracked_power(prev, 0.5, winding) == pytest.approx(-1)


def test_as_complex_rejects_non_finite():
    with pytest.raises(ValidationError):
        as_complex(float("nan"))
    with pytest.raises(ValidationError):
        as_complex("x")
