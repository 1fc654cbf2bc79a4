from __future__ import annotations

import numpy as np
import pytest

from scripts.core.errors import DegenerateParametrizationError, ValidationError
from scripts.core.model import (CoefficientSet, ParameterSet, decoupled_rhs, forward, k_values,
                                linear_identity_residuals, rhs_eval, spectral, swap_symmetry,
                                u_rhs)


def test_forward_golden(golden_parameters, golden_coefficients):
    C = forward(golden_parameters)
    np.testing.assert_allclose(C.values(), golden_coefficients.values(), rtol=1e-13, atol=1e-13)


def test_forward_decoupled(decoupled_parameters, decoupled_coefficients):
    assert forward(decoupled_parameters).distance(decoupled_coefficients) < 1e-13


def test_linear_identities_hold(golden_parameters, random_parameters):
    for P in [golden_parameters] + [random_parameters(complex_values=True) for _ in range(50)]:
        assert max(linear_identity_residuals(P.a1, P.a2, forward(P))) < 1e-12


def test_k_values_golden(golden_parameters):
    K = k_values(golden_parameters)
    # K1 = g1 a1 b1^2 + g2 a1^2 b1 + g3 a1^3 + b1^3
    assert K.K1 == pytest.approx(9 + 3 + 1 + 27)


def test_degenerate_parameters_rejected():
    with pytest.raises(DegenerateParametrizationError):
        ParameterSet(1, 2, 1, 2, 0, 0, 0)
    with pytest.raises(DegenerateParametrizationError):
        ParameterSet(0, 2, 3, 1, 0, 0, 0)
    with pytest.raises(ValidationError):
        CoefficientSet.from_values([1, 2, 3])


def test_spectral_gamma_zero():
    S = spectral(0, 0, 0)
    np.testing.assert_allclose(S.roots, [-1, 0, 1], atol=1e-12)
    np.testing.assert_allclose(S.lambdas, [0.5, -1, 0.5], atol=1e-12)
    assert not S.degenerate


def test_spectral_identities_random(rng):
    for _ in range(200):
        g = rng.normal(size=3) + 1j * rng.normal(size=3)
        S = spectral(*g)
        if S.degenerate:
            continue
        assert max(S.identity_residuals()) < 1e-10


def test_spectral_repeated_root():
    # gamma = (0, 1, 0): u^3, triple root
    S = spectral(0, 1, 0)
    assert S.degenerate and S.lambdas is None
    with pytest.raises(ValidationError):
        S.identity_residuals()


def test_swap_symmetry(decoupled_coefficients):
    swapped = swap_symmetry(decoupled_coefficients)
    assert swapped.values() == (7, 9, 3, 0, -6, -6, 0, 1)
    assert swap_symmetry(swapped) == decoupled_coefficients


def test_rhs_eval(decoupled_coefficients):
    assert rhs_eval(decoupled_coefficients, 1, 1) == (-11, 19)


def test_decoupled_form_matches_rhs(random_parameters, rng):
    for _ in range(20):
        P = random_parameters(complex_values=True)
        C = forward(P)
        x1, x2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        f1, f2 = rhs_eval(C, x1, x2)
        y, w = P.a1 * x1 + P.a2 * x2, P.b1 * x1 + P.b2 * x2
        dy, dw = decoupled_rhs(P, y, w)
        scale = abs(dy) + abs(dw) + 1
        assert abs(P.a1 * f1 + P.a2 * f2 - dy) < 1e-10 * scale
        assert abs(P.b1 * f1 + P.b2 * f2 - dw) < 1e-10 * scale
        assert u_rhs(P, y, w / y) == pytest.approx((dw * y - w * dy) / y ** 2, rel=1e-9)


def test_scaled(golden_coefficients):
    assert golden_coefficients.scaled(2).c11 == pytest.approx(31.6)
