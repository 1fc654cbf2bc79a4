from __future__ import annotations

import pytest

from scripts.constraints.appendix import appendix_a_solve, appendix_b_solve
from scripts.constraints.completion import (CLOSED_FORMS, all_pairs, closed_form_starts,
                                            complete_pair)
from scripts.constraints.residuals import (SATISFIED_TOL, constraint_residuals, radicals,
                                           second_constraint_value)
from scripts.core.errors import ValidationError
from scripts.core.model import COEFF_NAMES, CoefficientSet, forward, swap_symmetry


def test_golden_on_manifold(golden_coefficients):
    report = constraint_residuals(golden_coefficients)
    assert report.satisfied
    assert report.worst < 1e-9


def test_decoupled_second_constraint_vanishes(decoupled_coefficients):
    assert constraint_residuals(decoupled_coefficients).residual_second < 1e-15


def test_off_manifold_detected():
    report = constraint_residuals(CoefficientSet(1, 2, 3, 4, 5, 6, 7, 8))
    assert not report.satisfied
    assert report.to_dict()["satisfied"] is False


def test_forward_outputs_satisfy_constraints(random_parameters):
    for _ in range(300):
        P = random_parameters(magnitude=3.0, complex_values=True)
        report = constraint_residuals(forward(P))
        assert report.satisfied, report.to_dict()


def test_second_constraint_swap_invariant(rng):
    for _ in range(20):
        C = CoefficientSet.from_values(rng.normal(size=8) + 1j * rng.normal(size=8))
        a = abs(second_constraint_value(C))
        b = abs(second_constraint_value(swap_symmetry(C)))
        assert a == pytest.approx(b, rel=1e-10, abs=1e-12)


def test_radicals_golden(golden_coefficients):
    R = radicals(golden_coefficients)
    assert R.R1 == pytest.approx(1, abs=1e-10)
    assert R.G1 is None


def test_radicals_reduced_case():
    R = radicals(CoefficientSet(1, 6, 6, 0, 0, -3, -3, 1))
    assert R.G1 is not None
    # g12^2 + 12 g21 g23 = 36 - 36
    assert R.G2 == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("which", COEFF_NAMES)
def test_single_coefficient_recovered(which, random_parameters):
    for _ in range(5):
        C = forward(random_parameters())
        truth = C.as_dict()[which]
        scale = C.scale
        for solve in (appendix_a_solve, appendix_b_solve):
            values = solve(C, which)
            assert min(abs(v - truth) for v in values) < 1e-8 * scale


def test_completion_recovers_golden_pair(golden_coefficients):
    known = {k: v for k, v in golden_coefficients.as_dict().items() if k not in ("c11", "c24")}
    found = complete_pair(known, ("c11", "c24"))
    assert any(abs(f.coefficients.c11 - 15.8) < 1e-8 and abs(f.coefficients.c24 - 1.8) < 1e-8
               for f in found)
    for f in found:
        assert constraint_residuals(f.coefficients).satisfied


COLUMN_PAIRS = [(f"c1{l}", f"c2{l}") for l in range(1, 5)]
ISOLATED_PAIRS = [p for p in all_pairs() if p not in COLUMN_PAIRS]


@pytest.mark.parametrize("pair", ISOLATED_PAIRS)
def test_completion_recovers_isolated_originals(pair, random_parameters):
    for _ in range(50):
        C = forward(random_parameters())
        found = complete_pair(C.as_dict(), pair)
        hits = [f for f in found if f.coefficients.distance(C) < 1e-7 * C.scale]
        assert hits, (pair, C.as_dict())
        assert not hits[0].family
        assert all(f.residual < SATISFIED_TOL for f in found)


@pytest.mark.parametrize("pair", sorted(CLOSED_FORMS))
def test_closed_forms_are_exact(pair, random_parameters):
    for _ in range(3):
        C = forward(random_parameters())
        starts = closed_form_starts(C.as_dict(), pair)
        on_manifold = {}
        for label, z in starts:
            trial = C.replace(**{pair[0]: z[0], pair[1]: z[1]})
            if constraint_residuals(trial, 1e-8).satisfied:
                on_manifold.setdefault(label, z)
        assert on_manifold.keys() == {label for label, _ in starts}
        found = complete_pair(C.as_dict(), pair)
        for label, z in on_manifold.items():
            match = [f for f in found
                     if abs(f.coefficients.as_dict()[pair[0]] - z[0]) < 1e-8 * C.scale
                     and abs(f.coefficients.as_dict()[pair[1]] - z[1]) < 1e-8 * C.scale]
            assert match, label
            assert not match[0].source.startswith("newton")
            assert match[0].source != "elimination"


@pytest.mark.parametrize("pair", COLUMN_PAIRS)
def test_column_pairs_form_a_family(pair, golden_coefficients, golden_parameters):
    a1, a2 = golden_parameters.a1, golden_parameters.a2
    found = complete_pair(golden_coefficients.as_dict(), pair)
    family = [f for f in found if f.family]
    assert family
    original = golden_coefficients.as_dict()
    for f in family:
        assert constraint_residuals(f.coefficients).satisfied
        assert f.tangent is not None
        t0, t1 = f.tangent
        # a1 c1l + a2 c2l is fixed along the family
        assert abs(a1 * t0 + a2 * t1) < 1e-6
        shift = [f.coefficients.as_dict()[p] - original[p] for p in pair]
        assert abs(a1 * shift[0] + a2 * shift[1]) < 1e-7 * golden_coefficients.scale


def test_isolated_completion_has_no_tangent(golden_coefficients):
    found = complete_pair(golden_coefficients.as_dict(), ("c11", "c24"))
    assert all(not f.family and f.tangent is None for f in found)


def test_completion_input_checks(golden_coefficients):
    assert len(all_pairs()) == 28
    with pytest.raises(ValidationError):
        complete_pair(golden_coefficients.as_dict(), ("c11", "c11"))
    with pytest.raises(ValidationError):
        complete_pair({"c11": 1}, ("c12", "c13"))


def test_single_coefficient_values_merged_and_ranked(rng):
    # (c13 - 3 c24)^2 + 12 c14 c23 = 0: both radical signs coincide
    assert len(appendix_b_solve(CoefficientSet(0, 1, 6, 1, 1, 1, -3, 0), "c11")) == 1
    for _ in range(5):
        C = CoefficientSet.from_values(rng.normal(size=8) + 1j * rng.normal(size=8))
        values = appendix_b_solve(C, "c13")
        assert len(values) == 2
        residuals = [abs(second_constraint_value(C.replace(c13=v))) / C.replace(c13=v).scale ** 4
                     for v in values]
        assert residuals == sorted(residuals)


@pytest.mark.parametrize("eta", [2, -3, 1 + 1j])
def test_residuals_invariant_under_rescaling(eta, rng):
    samples = [CoefficientSet(1, 2, 3, 4, 5, 6, 7, 8)]
    samples += [CoefficientSet.from_values(rng.normal(size=8) + 1j * rng.normal(size=8))
                for _ in range(10)]
    for C in samples:
        base = constraint_residuals(C)
        scaled = constraint_residuals(C.scaled(eta))
        assert scaled.satisfied == base.satisfied
        for name in ("residual_32a", "residual_32b", "residual_32c", "residual_cross",
                     "residual_second"):
            assert getattr(scaled, name) == pytest.approx(getattr(base, name), rel=1e-12, abs=1e-15)
