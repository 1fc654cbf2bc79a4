from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from scripts.core.errors import ValidationError
from scripts.core.model import ParameterSet, forward, spectral
from scripts.isochronous.extension import (IsochronousSystem, best_fraction, circle_closure,
                                           detect_period, rationality_check, scan_sheet_count,
                                           solve_tilde, tau_of_t, tilde_residual)

SMALL = (0.01, 0.02)
# t_w sits at the centre of the tau circle for omega = 1, t_y outside it
ENCLOSING = tuple(cmath.exp(-1j * math.pi / 4) / 3 * np.ones(2))
# gamma = (-1, -1, 0): spectral roots -1, 0, 2 with lambda = (1/3, -1/2, 1/6), so u(tau) has
# three sheets. y0^2 = exp(-i pi/3)/2 and u0 = 1 put two of the three w blow-up points
# inside the tau circle of omega = 1/4; one loop then permutes the sheets cyclically.
CUBE_ROOT_PARAMETERS = ParameterSet(1, 1, 1, 2, -1, -1, 0)
CUBE_ROOT_START = (cmath.exp(-1j * math.pi / 6) / math.sqrt(2), 0)


def test_tau_of_t():
    assert tau_of_t(1.0, math.pi / 2) == pytest.approx(1j)
    assert abs(tau_of_t(1.0, math.pi)) < 1e-15
    assert abs(tau_of_t(2.0, 0.3) - 1j / 4) == pytest.approx(0.25)


def test_system_geometry(decoupled_coefficients):
    system = IsochronousSystem(decoupled_coefficients, 1.0)
    assert system.T == pytest.approx(math.pi)
    assert system.T_tilde == pytest.approx(2 * math.pi)
    assert system.center == 0.5j
    assert system.radius == 0.5
    assert IsochronousSystem(decoupled_coefficients, -2.0).center == -0.25j
    for omega in (0.0, math.inf, 1j):
        with pytest.raises(ValidationError):
            IsochronousSystem(decoupled_coefficients, omega)


def test_small_data_is_periodic(decoupled_coefficients):
    report = detect_period(decoupled_coefficients, 1.0, SMALL)
    assert report.k == 1
    assert report.defect_at_kT[0] < 1e-7
    assert report.T_tilde == pytest.approx(2 * math.pi)


def test_enclosed_square_root_branch_keeps_period(decoupled_coefficients):
    # tau circles twice per T~, which undoes a square-root branch
    report = detect_period(decoupled_coefficients, 1.0, ENCLOSING, k_max=4)
    assert report.k == 1


def test_enclosed_cube_root_branches_triple_period():
    C = forward(CUBE_ROOT_PARAMETERS)
    report = detect_period(C, 0.25, CUBE_ROOT_START, k_max=4, eps=1e-6)
    assert report.k == 3
    assert min(report.defect_at_kT[:2]) > 1e-3
    scan = scan_sheet_count(C, 0.25, CUBE_ROOT_START, [0.1, 1.0], k_max=4, eps=1e-6)
    assert scan == [(0.1, 1), (1.0, 3)]


def test_cube_root_lambdas_are_rational():
    report = rationality_check(spectral(*CUBE_ROOT_PARAMETERS.gamma))
    assert report.rational
    assert sorted(report.fractions) == [(-1, 2), (1, 6), (1, 3)]
    assert report.lcm_denominator == 6


def test_detect_period_edge_cases(decoupled_coefficients):
    assert detect_period(decoupled_coefficients, 1.0, (0, 0)).k == 1
    with pytest.raises(ValidationError):
        detect_period(decoupled_coefficients, 1.0, SMALL, k_max=0)


def test_solve_tilde_half_and_full_period(decoupled_parameters):
    x0 = np.array(SMALL)
    traj = solve_tilde(decoupled_parameters, 1.0, SMALL, [0, math.pi / 2, math.pi, 2 * math.pi])
    assert traj.taus[1] == pytest.approx(1j)
    np.testing.assert_allclose(traj.states[2], -x0, atol=1e-10)
    np.testing.assert_allclose(traj.states[3], x0, atol=1e-10)
    assert len(traj.residuals) == 4
    assert max(traj.residuals) < 1e-6
    with pytest.raises(ValidationError):
        solve_tilde(decoupled_parameters, 1.0, SMALL, [1.0, 2.0])


def test_tilde_residual_flags_a_wrong_state(decoupled_parameters, decoupled_coefficients):
    h = 1e-4
    x0 = np.array(SMALL, dtype=complex)
    later = solve_tilde(decoupled_parameters, 1.0, SMALL, [0, h]).states[1]
    assert tilde_residual(decoupled_coefficients, 1.0, 0.0, x0, h, later) < 1e-6
    assert tilde_residual(decoupled_coefficients, 1.0, 0.0, x0, h, 1.01 * later) > 1e-2


def test_circle_closure_defect(decoupled_coefficients):
    assert circle_closure(decoupled_coefficients, 1.0, SMALL, samples=32).closure_defect < 1e-9
    enclosing = circle_closure(decoupled_coefficients, 1.0, ENCLOSING, samples=32)
    assert not enclosing.blow_up
    assert enclosing.closure_defect > 1e-3


def test_rationality_gamma_zero():
    report = rationality_check(spectral(0, 0, 0))
    assert report.rational
    assert sorted(report.fractions) == [(-1, 1), (1, 2), (1, 2)]
    assert report.lcm_denominator == 2


def test_rationality_irrational():
    # roots 0, 1, sqrt(2)
    r = math.sqrt(2)
    assert not rationality_check(spectral(-(1 + r), 1 + r, 0)).rational
    assert not rationality_check(spectral(0, 1, 0)).rational


@pytest.mark.parametrize("x, expected", [
    (0.5, (1, 2)),
    (-1.0, (-1, 1)),
    (2 / 3, (2, 3)),
    (-0.25, (-1, 4)),
    (math.pi, None),
])
def test_best_fraction(x, expected):
    assert best_fraction(x) == expected


def test_scan_sheet_count(decoupled_coefficients):
    scan = scan_sheet_count(decoupled_coefficients, 1.0, (1, 2), [0.005, 0.01], k_max=2)
    assert scan == [(0.005, 1), (0.01, 1)]
