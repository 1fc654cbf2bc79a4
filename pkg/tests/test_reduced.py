from __future__ import annotations

import pytest

from scripts.core.errors import ConstraintError, FormulaInapplicableError, ValidationError
from scripts.core.model import forward
from scripts.reduced.system import (ReducedCoefficients, dcons_values, from_full,
                                    reduced_alpha, reduced_constraint_residuals, reduced_invert,
                                    reduced_pair_solve, reduced_pairs, reduced_parameters,
                                    reduced_radicals, single_constraint_value, to_full)


@pytest.fixture
def reduced_example() -> ReducedCoefficients:
    # forward image of a=(1,1), b=(1,2), gamma=(0,-6,6)
    return ReducedCoefficients(1, 6, 6, -3, -3, 1)


def test_reduced_parameters_example(reduced_example):
    P = reduced_parameters(1, 1, 1, 2, 0)
    assert P.gamma2 == pytest.approx(-6)
    assert P.gamma3 == pytest.approx(6)
    C = forward(P)
    assert from_full(C).distance(reduced_example) < 1e-12
    assert to_full(reduced_example).distance(C) < 1e-12


def test_reduced_parameters_random(random_parameters):
    for _ in range(20):
        P = random_parameters(complex_values=True)
        Q = reduced_parameters(P.a1, P.a2, P.b1, P.b2, P.gamma1)
        G = from_full(forward(Q))
        assert reduced_constraint_residuals(G).satisfied


def test_reduced_parameters_impossible():
    with pytest.raises(ValidationError):
        reduced_parameters(1, 0, 1, 2, 0)


def test_from_full_rejects_full_system(golden_coefficients):
    with pytest.raises(ValidationError):
        from_full(golden_coefficients)


def test_example_constraints(reduced_example):
    assert dcons_values(reduced_example) == (0, 0)
    assert single_constraint_value(reduced_example) == 0
    report = reduced_constraint_residuals(reduced_example)
    assert report.satisfied
    assert len(report.residual_newcon1) == 2
    assert set(report.to_dict()) >= {"residual_single", "residual_dcons1", "residual_dcons2"}


def test_radicals(reduced_example):
    R = reduced_radicals(reduced_example)
    assert R.G1 == pytest.approx(3)
    assert R.G2 == 0
    assert R.G_ratio == pytest.approx(1)
    assert reduced_radicals(ReducedCoefficients(1, 6, 6, -3, -3, 0)).G_ratio is None


def test_violated_constraints():
    G = ReducedCoefficients(1, 2, 3, 4, 5, 6)
    assert not reduced_constraint_residuals(G).satisfied
    with pytest.raises(ConstraintError):
        reduced_invert(G)
    with pytest.raises(ValidationError):
        reduced_constraint_residuals(ReducedCoefficients(0, 0, 0, 0, 0, 0))


def test_dcons_swap_covariance(rng):
    for _ in range(20):
        G = ReducedCoefficients(*(rng.normal(size=6) + 1j * rng.normal(size=6)))
        d1, d2 = dcons_values(G)
        s1, s2 = dcons_values(G.swapped())
        assert s1 == pytest.approx(-d1, rel=1e-10, abs=1e-10)
        assert s2 == pytest.approx(d2, rel=1e-10, abs=1e-10)


def test_reduced_alpha(reduced_example):
    assert reduced_alpha(reduced_example) == pytest.approx(1)
    # first form is 0/0, the second decides
    G = ReducedCoefficients(1, 0, 2, 3, 5, 7)
    assert reduced_alpha(G) == pytest.approx(2 * 5 / (-2 * 3 - 25 + 63))


def test_reduced_invert_example(reduced_example):
    result = reduced_invert(reduced_example)
    assert result.forward_error < 1e-8
    assert result.alpha == pytest.approx(1)
    assert forward(result.parameters).distance(to_full(reduced_example)) < 1e-8


def test_reduced_invert_random(random_parameters):
    for _ in range(10):
        P = random_parameters()
        G = from_full(forward(reduced_parameters(P.a1, P.a2, P.b1, P.b2, P.gamma1)))
        result = reduced_invert(G)
        assert forward(result.parameters).distance(to_full(G)) < 1e-7 * G.scale


def test_reduced_invert_rejects_zero_g11():
    with pytest.raises(ValidationError):
        reduced_invert(ReducedCoefficients(0, 0, 1, 0, 1, 1))


def test_all_pairs_have_a_route():
    assert len(reduced_pairs()) == 15


RECOVERABLE = [p for p in reduced_pairs() if p not in {("g12", "g21"), ("g13", "g22")}]


@pytest.mark.parametrize("pair", RECOVERABLE)
def test_pair_completion_recovers_example(reduced_example, pair):
    known = {n: v for n, v in reduced_example.as_dict().items() if n not in pair}
    found = reduced_pair_solve(known, pair)
    assert any(c.coefficients.distance(reduced_example) < 1e-9 for c in found)
    for c in found:
        assert reduced_constraint_residuals(c.coefficients).satisfied


def test_mirrored_pair_is_labelled(reduced_example):
    known = {n: v for n, v in reduced_example.as_dict().items() if n not in ("g22", "g23")}
    found = reduced_pair_solve(known, ("g22", "g23"))
    assert all(c.source.endswith("~swap") for c in found)
    assert any(c.coefficients.g22 == pytest.approx(-3) and c.coefficients.g23 == pytest.approx(1)
               for c in found)


def test_special_pair_g12_g21():
    # DCons vanish for g12 = 0, g21 = 3 g11
    found = reduced_pair_solve({"g11": 1, "g13": 2, "g22": 5, "g23": 7}, ("g12", "g21"))
    assert len(found) == 1
    assert found[0].special
    assert found[0].coefficients.g12 == 0
    assert found[0].coefficients.g21 == 3


def test_pair_solve_errors(reduced_example):
    known = reduced_example.as_dict()
    with pytest.raises(ValidationError):
        reduced_pair_solve(known, ("g11", "g11"))
    with pytest.raises(ValidationError):
        reduced_pair_solve({"g11": 1, "g12": 6}, ("g22", "g23"))
    no_ratio = {"g11": 1, "g13": 6, "g21": -3, "g23": 0}
    with pytest.raises(FormulaInapplicableError):
        reduced_pair_solve(no_ratio, ("g12", "g22"))


def random_reduced(random_parameters) -> ReducedCoefficients:
    P = random_parameters(complex_values=True)
    return from_full(forward(reduced_parameters(P.a1, P.a2, P.b1, P.b2, P.gamma1)))


@pytest.mark.parametrize("pair", reduced_pairs())
def test_pair_formulas_on_random_inputs(pair, random_parameters):
    for _ in range(50):
        G = random_reduced(random_parameters)
        # generic inputs: both signs of G2 give distinct candidates
        assert abs(reduced_radicals(G).G2) > 1e-8 * G.scale
        known = {n: v for n, v in G.as_dict().items() if n not in pair}
        found = reduced_pair_solve(known, pair)
        assert all(c.residual < 1e-10 for c in found)
        if pair in RECOVERABLE:
            assert any(c.coefficients.distance(G) < 1e-8 * G.scale for c in found), G.as_dict()
