from __future__ import annotations

import math

import numpy as np
import pytest

from scripts.core.errors import ValidationError
from scripts.integration.dopri import (OdeProblem, advance, dopri_step, integrate,
                                       integrate_circle, system_problem)


def cube(t, x):
    return x ** 3


def test_real_segment():
    sol = integrate(OdeProblem(rhs=cube, x0=[1.0], times=[0, 0.25, 0.375]))
    assert not sol.blow_up
    assert sol.final[0] == pytest.approx(2, rel=1e-9)
    assert sol.states[1][0] == pytest.approx(math.sqrt(2), rel=1e-9)
    assert sol.accepted > 0


def test_complex_polyline_stays_on_principal_branch():
    sol = integrate(OdeProblem(rhs=cube, x0=[1.0], times=[0, 0.25 + 0.25j, 0.375]))
    assert sol.final[0] == pytest.approx(2, rel=1e-9)


def test_loop_around_branch_point_flips_sign():
    # 1 - 2t winds once around 0, so (1 - 2t)^(-1/2) comes back as -1
    path = [0, 0.5 + 0.5j, 1.0, 0.5 - 0.5j, 0]
    sol = integrate(OdeProblem(rhs=cube, x0=[1.0], times=path))
    assert sol.final[0] == pytest.approx(-1, abs=1e-8)


def test_blow_up_truncates():
    sol = integrate(OdeProblem(rhs=cube, x0=[1.0], times=[0, 0.25, 0.6]))
    assert sol.blow_up
    assert len(sol.times) == 2
    assert abs(sol.t_blowup - 0.5) < 1e-4
    assert sol.message


def test_circle_around_branch_point():
    problem = OdeProblem(rhs=cube, x0=[1.0], times=[0])
    sol = integrate_circle(problem, radius=0.5, center=0.5, samples=8)
    assert not sol.blow_up
    assert sol.closure_defect == pytest.approx(2, abs=1e-7)
    assert len(sol.times) == 9


def test_circle_entire_solution_closes():
    problem = OdeProblem(rhs=lambda t, x: x, x0=[1.0], times=[0])
    sol = integrate_circle(problem, radius=1.0, center=2.0, samples=4, clockwise=True)
    assert sol.closure_defect < 1e-8
    np.testing.assert_allclose(sol.states[0], [math.exp(1.0)], rtol=1e-9)


def test_circle_degenerate_radius():
    problem = OdeProblem(rhs=cube, x0=[1.0], times=[0])
    assert integrate_circle(problem, radius=0, center=0.1, samples=3).closure_defect == 0
    with pytest.raises(ValidationError):
        integrate_circle(problem, radius=-1, center=0.1, samples=3)
    with pytest.raises(ValidationError):
        integrate_circle(problem, radius=1, center=0.1, samples=0)


@pytest.mark.parametrize("kwargs", [
    {"times": []},
    {"times": [0.1, 0.2]},
    {"times": [0, 1], "rtol": 0},
    {"times": [0, 1], "x0": [math.nan]},
])
def test_problem_validation(kwargs):
    args = {"rhs": cube, "x0": [1.0]}
    args.update(kwargs)
    with pytest.raises(ValidationError):
        OdeProblem(**args)


def test_advance_zero_segment():
    x = np.array([1 + 1j])
    np.testing.assert_array_equal(advance(cube, 0.3, 0.3, x), x)


def test_system_problem_decoupled(decoupled_coefficients):
    sol = integrate(system_problem(decoupled_coefficients, (1, 1), [0, 1 / 64, 1 / 32]))
    np.testing.assert_allclose(sol.final, [0.083228, 2.226173], atol=1e-6)


def test_fixed_step_order_is_five():
    def error(n):
        h = 0.25 / n
        x = np.array([1.0 + 0j])
        k1 = cube(0.0, x)
        for i in range(n):
            x, _, k1 = dopri_step(cube, i * h, x, h, k1)
        return abs(x[0] - math.sqrt(2))

    ratio = error(16) / error(32)
    assert 32 / 4 < ratio < 32 * 4


def test_error_follows_tolerance():
    # global error of an adaptive fifth-order pair scales like rtol**(4/5)
    errors = []
    for rtol in (1e-6, 1e-6 / 16):
        sol = integrate(OdeProblem(rhs=cube, x0=[1.0], times=[0, 0.375], rtol=rtol, atol=1e-16))
        errors.append(abs(sol.final[0] - 2))
    ratio = errors[0] / errors[1]
    assert 16 ** 0.8 / 4 < ratio < 16 ** 0.8 * 4
