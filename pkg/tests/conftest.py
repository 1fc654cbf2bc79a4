"""Shared worked systems and random generators for the test suite."""
from __future__ import annotations

from typing import Callable

import numpy as np
import pytest

from scripts.core.errors import ValidationError
from scripts.core.model import CoefficientSet, ParameterSet

SEED = 20261018


@pytest.fixture
def golden_parameters() -> ParameterSet:
    return ParameterSet(1, 2, 3, 1, 1, 1, 1)


@pytest.fixture
def golden_coefficients() -> CoefficientSet:
    return CoefficientSet(15.8, 26.8, 17.6, 4.4, -7.4, -10.4, -2.8, 1.8)


@pytest.fixture
def decoupled_parameters() -> ParameterSet:
    return ParameterSet(1, 1, 1, 2, 0, 0, 0)


@pytest.fixture
def decoupled_coefficients() -> CoefficientSet:
    return CoefficientSet(1, 0, -6, -6, 0, 3, 9, 7)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def draw_parameters(rng: np.random.Generator, magnitude: float = 2.0,
                    complex_values: bool = False) -> ParameterSet:
    """Random parameter set with a, b and c kept away from zero."""
    while True:
        v = rng.uniform(-magnitude, magnitude, size=7).astype(complex)
        if complex_values:
            v += 1j * rng.uniform(-magnitude, magnitude, size=7)
        if np.any(np.abs(v[:4]) < 0.3):
            continue
        try:
            P = ParameterSet(*v)
        except ValidationError:
            continue
        if abs(P.c) > 0.3:
            return P


@pytest.fixture
def random_parameters(rng) -> Callable[..., ParameterSet]:
    return lambda **kw: draw_parameters(rng, **kw)
