"""
Domain types and the forward parametrization of the solvable cubic systems.

A system is
    x1' = c11 x1^3 + c12 x1^2 x2 + c13 x1 x2^2 + c14 x2^3
    x2' = c21 x1^3 + c22 x1^2 x2 + c23 x1 x2^2 + c24 x2^3
and it is solvable by algebraic operations when its eight coefficients come
from seven parameters (a1, a2, b1, b2, gamma1, gamma2, gamma3) through
``forward``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from scripts.core.algebra import as_complex, solve_cubic
from scripts.core.errors import DegenerateParametrizationError, ValidationError

COEFF_NAMES: Tuple[str, ...] = ("c11", "c12", "c13", "c14", "c21", "c22", "c23", "c24")
SWAP: Dict[str, str] = {
    "c11": "c24", "c12": "c23", "c13": "c22", "c14": "c21",
    "c21": "c14", "c22": "c13", "c23": "c12", "c24": "c11",
}

C_THRESHOLD = 1e-12
ROOT_SEPARATION = 1e-9


@dataclass(frozen=True)
class CoefficientSet:
    c11: complex
    c12: complex
    c13: complex
    c14: complex
    c21: complex
    c22: complex
    c23: complex
    c24: complex

    def __post_init__(self):
        for name in COEFF_NAMES:
            object.__setattr__(self, name, as_complex(getattr(self, name), name))

    @classmethod
    def from_values(cls, values: Iterable) -> "CoefficientSet":
        values = list(values)
        if len(values) != 8:
            raise ValidationError(f"expected 8 coefficients, got {len(values)}")
        return cls(*values)

    @classmethod
    def from_dict(cls, data: Mapping[str, complex]) -> "CoefficientSet":
        missing = [n for n in COEFF_NAMES if n not in data]
        if missing:
            raise ValidationError(f"missing coefficients: {missing}")
        return cls(**{n: data[n] for n in COEFF_NAMES})

    def values(self) -> Tuple[complex, ...]:
        return tuple(getattr(self, n) for n in COEFF_NAMES)

    def as_dict(self) -> Dict[str, complex]:
        return {n: getattr(self, n) for n in COEFF_NAMES}

    def as_array(self) -> np.ndarray:
        return np.array(self.values(), dtype=complex).reshape(2, 4)

    @property
    def scale(self) -> float:
        return max(abs(v) for v in self.values())

    def replace(self, **changes) -> "CoefficientSet":
        return dataclasses.replace(self, **changes)

    def scaled(self, eta: complex) -> "CoefficientSet":
        return CoefficientSet.from_values(eta * v for v in self.values())

    def distance(self, other: "CoefficientSet") -> float:
        return max(abs(x - y) for x, y in zip(self.values(), other.values()))


@dataclass(frozen=True)
class ParameterSet:
    a1: complex
    a2: complex
    b1: complex
    b2: complex
    gamma1: complex
    gamma2: complex
    gamma3: complex

    def __post_init__(self):
        for f in dataclasses.fields(self):
            object.__setattr__(self, f.name, as_complex(getattr(self, f.name), f.name))
        vanishing = [n for n in ("a1", "a2", "b1", "b2") if getattr(self, n) == 0]
        if vanishing:
            raise DegenerateParametrizationError(
                f"parameters must not vanish: {vanishing}", {"vanishing": vanishing})
        if abs(self.c) < C_THRESHOLD * (abs(self.a1 * self.b2) + abs(self.a2 * self.b1)):
            raise DegenerateParametrizationError(
                "c = a1*b2 - a2*b1 vanishes", {"c": [self.c.real, self.c.imag]})

    @property
    def c(self) -> complex:
        return self.a1 * self.b2 - self.a2 * self.b1

    @property
    def a(self) -> Tuple[complex, complex]:
        return (self.a1, self.a2)

    @property
    def b(self) -> Tuple[complex, complex]:
        return (self.b1, self.b2)

    @property
    def gamma(self) -> Tuple[complex, complex, complex]:
        return (self.gamma1, self.gamma2, self.gamma3)

    def replace(self, **changes) -> "ParameterSet":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class KValues:
    K1: complex
    K2: complex
    K3: complex
    K4: complex

    def values(self) -> Tuple[complex, complex, complex, complex]:
        return (self.K1, self.K2, self.K3, self.K4)


@dataclass(frozen=True)
class SpectralData:
    roots: Tuple[complex, complex, complex]
    lambdas: Optional[Tuple[complex, complex, complex]]
    degenerate: bool

    @property
    def u1(self) -> complex:
        return self.roots[0]

    @property
    def u2(self) -> complex:
        return self.roots[1]

    @property
    def u3(self) -> complex:
        return self.roots[2]

    def identity_residuals(self) -> Tuple[float, float, float]:
        """Sum(l), sum(l*u) and sum(l_j u_k u_l) - 1; all vanish for distinct roots."""
        if self.lambdas is None:
            raise ValidationError("spectral data is degenerate, no weights")
        u, lam = self.roots, self.lambdas
        s0 = sum(lam)
        s1 = sum(l * r for l, r in zip(lam, u))
        s2 = lam[0] * u[1] * u[2] + lam[1] * u[2] * u[0] + lam[2] * u[0] * u[1] - 1.0
        return (abs(s0), abs(s1), abs(s2))


def k_values(P: ParameterSet) -> KValues:
    a1, a2, b1, b2 = P.a1, P.a2, P.b1, P.b2
    g1, g2, g3 = P.gamma
    K1 = g1 * a1 * b1 ** 2 + g2 * a1 ** 2 * b1 + g3 * a1 ** 3 + b1 ** 3
    K2 = (g1 * (a2 * b1 ** 2 + 2 * a1 * b1 * b2) + g2 * (a1 ** 2 * b2 + 2 * a1 * a2 * b1)
          + 3 * g3 * a1 ** 2 * a2 + 3 * b1 ** 2 * b2)
    K3 = (g1 * (a1 * b2 ** 2 + 2 * a2 * b1 * b2) + g2 * (a2 ** 2 * b1 + 2 * a1 * a2 * b2)
          + 3 * g3 * a1 * a2 ** 2 + 3 * b1 * b2 ** 2)
    K4 = g1 * a2 * b2 ** 2 + g2 * a2 ** 2 * b2 + g3 * a2 ** 3 + b2 ** 3
    return KValues(K1, K2, K3, K4)


def monomials(a1: complex, a2: complex) -> Tuple[complex, complex, complex, complex]:
    """Coefficients of (a1 x1 + a2 x2)^3: the right-hand sides of the linear identities."""
    return (a1 ** 3, 3 * a1 ** 2 * a2, 3 * a1 * a2 ** 2, a2 ** 3)


def forward(P: ParameterSet) -> CoefficientSet:
    """The eight coefficients of the system solved by the parameters P."""
    c = P.c
    if abs(c) < C_THRESHOLD * (abs(P.a1 * P.b2) + abs(P.a2 * P.b1)):
        raise DegenerateParametrizationError("c = a1*b2 - a2*b1 vanishes")
    K = k_values(P).values()
    m = monomials(P.a1, P.a2)
    first = [(m[l] * P.b2 - P.a2 * K[l]) / c for l in range(4)]
    second = [(-m[l] * P.b1 + P.a1 * K[l]) / c for l in range(4)]
    return CoefficientSet.from_values(first + second)


def linear_identity_residuals(a1: complex, a2: complex, C: CoefficientSet) -> Tuple[float, ...]:
    """|a1 c1l + a2 c2l - m_l| for l = 1..4, relative to the scale of the terms."""
    m = monomials(a1, a2)
    arr = C.as_array()
    out = []
    for l in range(4):
        lhs = a1 * arr[0, l] + a2 * arr[1, l]
        scale = max(abs(a1 * arr[0, l]), abs(a2 * arr[1, l]), abs(m[l]), 1e-300)
        out.append(abs(lhs - m[l]) / scale)
    return tuple(out)


def spectral_polynomial(gamma1: complex, gamma2: complex, gamma3: complex, u: complex) -> complex:
    return ((u + gamma1) * u + (gamma2 - 1.0)) * u + gamma3


def spectral(gamma1: complex, gamma2: complex, gamma3: complex) -> SpectralData:
    """Roots of u^3 + g1 u^2 + (g2 - 1) u + g3 and the weights lambda_j."""
    roots = solve_cubic(gamma1, complex(gamma2) - 1.0, gamma3).roots
    scale = 1.0 + max(abs(r) for r in roots)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(roots[i] - roots[j]) < ROOT_SEPARATION * scale:
                return SpectralData(roots=roots, lambdas=None, degenerate=True)
    lambdas = []
    for j in range(3):
        prod = 1.0 + 0j
        for l in range(3):
            if l != j:
                prod *= roots[j] - roots[l]
        lambdas.append(1.0 / prod)
    return SpectralData(roots=roots, lambdas=(lambdas[0], lambdas[1], lambdas[2]),
                        degenerate=False)


def swap_symmetry(C: CoefficientSet) -> CoefficientSet:
    """Coefficients of the system with x1 and x2 exchanged."""
    d = C.as_dict()
    return CoefficientSet.from_dict({SWAP[n]: v for n, v in d.items()})


def rhs_eval(C: CoefficientSet, x1: complex, x2: complex) -> Tuple[complex, complex]:
    t0 = x1 ** 3
    t1 = x1 ** 2 * x2
    t2 = x1 * x2 ** 2
    t3 = x2 ** 3
    return (C.c11 * t0 + C.c12 * t1 + C.c13 * t2 + C.c14 * t3,
            C.c21 * t0 + C.c22 * t1 + C.c23 * t2 + C.c24 * t3)


def rhs_vector(C: CoefficientSet):
    """Right-hand side as f(t, x) on complex numpy vectors, for the integrator."""
    arr = C.as_array()

    def f(t, x: np.ndarray) -> np.ndarray:
        x1, x2 = x[0], x[1]
        mons = np.array([x1 ** 3, x1 ** 2 * x2, x1 * x2 ** 2, x2 ** 3], dtype=complex)
        return arr @ mons

    return f


def decoupled_rhs(P: ParameterSet, y: complex, w: complex) -> Tuple[complex, complex]:
    """y' = y^3 and w' = w^3 + g1 y w^2 + g2 y^2 w + g3 y^3."""
    g1, g2, g3 = P.gamma
    return (y ** 3, w ** 3 + g1 * y * w ** 2 + g2 * y ** 2 * w + g3 * y ** 3)


def u_rhs(P: ParameterSet, y: complex, u: complex) -> complex:
    """u' for u = w / y."""
    return y ** 2 * spectral_polynomial(P.gamma1, P.gamma2, P.gamma3, u)
