from __future__ import annotations

import numpy as np
import pytest

from scripts.constraints.residuals import alpha_parts
from scripts.core.errors import ConstraintError
from scripts.core.model import CoefficientSet, forward
from scripts.inversion.invert import (a_of, alpha_candidates, alpha_of, b_of, gamma_of, invert,
                                      squares_cross_check)


def test_alpha_golden(golden_coefficients):
    (na, da), _, _ = alpha_parts(golden_coefficients)
    assert (na, da) == pytest.approx((112, 56))
    assert alpha_of(golden_coefficients) == pytest.approx(2)


def test_alpha_indeterminate_falls_back_to_quadratics(decoupled_coefficients):
    candidates = alpha_candidates(decoupled_coefficients)
    assert any(abs(a - 1) < 1e-9 for a in candidates)


def test_a_of_degenerate_denominator(decoupled_coefficients):
    a1, a2 = a_of(decoupled_coefficients, 1)
    assert (a1, a2) == pytest.approx((1, 1))


def test_squares_cross_check(golden_coefficients):
    A1, A2 = squares_cross_check(golden_coefficients)
    assert (A1, A2) == pytest.approx((1, 4))


def test_b_family_slice(golden_coefficients):
    pairs = b_of(golden_coefficients, 1, 2, "b1")
    # b = (3, 1) lies on the family b -> b + mu a, here with mu = -2
    assert any(abs(b1 - 1) < 1e-12 and abs(b2 + 3) < 1e-8 for b1, b2 in pairs)


def test_gamma_of_decoupled(decoupled_coefficients):
    fit = gamma_of(decoupled_coefficients, 1, 1, 1, 2)
    np.testing.assert_allclose(fit.gamma, [0, 0, 0], atol=1e-12)
    assert fit.residual < 1e-12


def test_invert_golden(golden_coefficients):
    result = invert(golden_coefficients)
    assert result.alpha == pytest.approx(2)
    assert result.forward_error < 1e-10
    assert forward(result.parameters).distance(golden_coefficients) < 1e-8 * golden_coefficients.scale
    assert result.residual_33KK < 1e-8


def test_invert_decoupled(decoupled_coefficients):
    result = invert(decoupled_coefficients)
    assert result.forward_error < 1e-8
    # with gamma = 0 the roles of a and b can be exchanged
    alpha = result.parameters.a2 / result.parameters.a1
    assert min(abs(alpha - 1), abs(alpha - 2)) < 1e-8


def test_invert_round_trip_random(random_parameters):
    for _ in range(25):
        P = random_parameters(complex_values=True)
        C = forward(P)
        result = invert(C)
        assert result.forward_error < 1e-8
        # a is fixed up to a joint sign
        ratio = result.parameters.a1 / P.a1
        assert abs(abs(ratio) - 1) < 1e-7
        assert result.parameters.a2 / P.a2 == pytest.approx(ratio, rel=1e-7)


def test_invert_rejects_off_manifold():
    with pytest.raises(ConstraintError):
        invert(CoefficientSet(1, 2, 3, 4, 5, 6, 7, 8))
