"""
The reduced systems with c14 = c21 = 0:

    x1' = x1 (g11 x1^2 + g12 x1 x2 + g13 x2^2)
    x2' = x2 (g21 x1^2 + g22 x1 x2 + g23 x2^2)

with c1j = g1j and c2,j+1 = g2j. Exchanging x1 and x2 maps g11 <-> g23,
g12 <-> g22 and g13 <-> g21.
"""
from __future__ import annotations

import cmath
import itertools
import logging
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from scripts.constraints.residuals import constraint_residuals
from scripts.core.algebra import as_complex
from scripts.core.errors import (ConstraintError, FormulaInapplicableError,
                                 ValidationError)
from scripts.core.model import CoefficientSet, ParameterSet
from scripts.inversion.invert import InversionResult, decompose

logger = logging.getLogger(__name__)

G_NAMES: Tuple[str, ...] = ("g11", "g12", "g13", "g21", "g22", "g23")
G_SWAP: Dict[str, str] = {
    "g11": "g23", "g12": "g22", "g13": "g21",
    "g21": "g13", "g22": "g12", "g23": "g11",
}
REDUCED_THRESHOLD = 1e-12
DCONS_TOL = 1e-10
DETERMINATE = 1e-10


@dataclass(frozen=True)
class ReducedCoefficients:
    g11: complex
    g12: complex
    g13: complex
    g21: complex
    g22: complex
    g23: complex

    def __post_init__(self):
        for name in G_NAMES:
            object.__setattr__(self, name, as_complex(getattr(self, name), name))

    @classmethod
    def from_dict(cls, data: Mapping[str, complex]) -> "ReducedCoefficients":
        missing = [n for n in G_NAMES if n not in data]
        if missing:
            raise ValidationError(f"missing reduced coefficients: {missing}")
        return cls(**{n: data[n] for n in G_NAMES})

    def values(self) -> Tuple[complex, ...]:
        return tuple(getattr(self, n) for n in G_NAMES)

    def as_dict(self) -> Dict[str, complex]:
        return {n: getattr(self, n) for n in G_NAMES}

    @property
    def scale(self) -> float:
        return max(abs(v) for v in self.values())

    def swapped(self) -> "ReducedCoefficients":
        return ReducedCoefficients.from_dict({G_SWAP[n]: v for n, v in self.as_dict().items()})

    def distance(self, other: "ReducedCoefficients") -> float:
        return max(abs(x - y) for x, y in zip(self.values(), other.values()))


@dataclass(frozen=True)
class ReducedRadicals:
    G1: complex
    G2: complex
    G_ratio: Optional[complex]
    FR4: complex


@dataclass(frozen=True)
class ReducedConstraintReport:
    residual_single: float
    residual_dcons1: float
    residual_dcons2: float
    residual_newcon1: Tuple[float, float]
    residual_newcon2: Tuple[float, float]
    satisfied: bool

    def to_dict(self) -> Dict[str, object]:
        d = asdict(self)
        d["residual_newcon1"] = list(self.residual_newcon1)
        d["residual_newcon2"] = list(self.residual_newcon2)
        return d


@dataclass(frozen=True)
class ReducedCompletion:
    coefficients: ReducedCoefficients
    source: str
    residual: float
    special: bool


def to_full(G: ReducedCoefficients) -> CoefficientSet:
    return CoefficientSet(G.g11, G.g12, G.g13, 0, 0, G.g21, G.g22, G.g23)


def from_full(C: CoefficientSet) -> ReducedCoefficients:
    s = C.scale
    if abs(C.c14) >= REDUCED_THRESHOLD * s or abs(C.c21) >= REDUCED_THRESHOLD * s:
        raise ValidationError("coefficients are not reduced (c14, c21 must vanish)",
                              {"c14": [C.c14.real, C.c14.imag], "c21": [C.c21.real, C.c21.imag]})
    return ReducedCoefficients(C.c11, C.c12, C.c13, C.c22, C.c23, C.c24)


def reduced_radicals(G: ReducedCoefficients) -> ReducedRadicals:
    g11, g12, g13, g21, g22, g23 = G.values()
    G1 = cmath.sqrt(g12 ** 2 + 4 * g13 * g21 - 2 * g12 * g22 + g22 ** 2)
    G2 = cmath.sqrt(g12 ** 2 + 12 * g21 * g23)
    ratio = cmath.sqrt(g11 / g23) if g23 != 0 else None
    FR4 = (g21 * (g13 - 3 * g23) - g22 * (g12 - g22)) * cmath.sqrt((g12 - g22) ** 2 + 4 * g13 * g21)
    return ReducedRadicals(G1, G2, ratio, FR4)


def single_constraint_value(G: ReducedCoefficients) -> complex:
    g11, g12, g13, g21, g22, g23 = G.values()
    return (g12 * (g12 * g22 - g13 * g21 - g22 ** 2 + 3 * g21 * g23)
            - g13 * g22 * (3 * g11 - g21))


def dcons_values(G: ReducedCoefficients) -> Tuple[complex, complex]:
    g11, g12, g13, g21, g22, g23 = G.values()
    first = -3 * g11 * g13 * g22 + (g12 - g22) * (g12 * g22 - g13 * g21) + 3 * g12 * g21 * g23
    second = g12 * g22 * (g13 - 3 * g23) * (g21 - 3 * g11) - (g12 * g22) ** 2
    return (first, second)


def newcon_values(G: ReducedCoefficients, FR4: complex) -> Tuple[complex, complex]:
    g11, g12, g13, g21, g22, g23 = G.values()
    first = (-g12 * (2 * g22 ** 2 + g21 * (g13 - 3 * g23))
             + g22 * (g12 ** 2 + g22 ** 2 + 3 * g21 * (g13 - g23)) + FR4)
    second = (-g12 ** 4 * g22
              + g13 * (3 * g11 - g21) * (g22 * (g22 ** 2 + g21 * (g13 - 3 * g23)) - FR4)
              + g12 ** 3 * (3 * g22 ** 2 + g21 * (g13 - 3 * g23))
              + g12 * (-3 * g13 ** 2 * g21 * (g11 - g21) + g22 ** 4 - g22 * FR4
                       - 3 * g21 * g22 ** 2 * g23
                       + g13 * (9 * g21 * g23 * (g11 - g21) - g22 ** 2 * (6 * g11 - 5 * g21)))
              + g12 ** 2 * (-3 * g22 ** 3 + FR4 + g22 * (3 * g11 * g13 - g21 * (5 * g13 - 6 * g23))))
    return (first, second)


def reduced_constraint_residuals(G: ReducedCoefficients, tol: float = DCONS_TOL) -> ReducedConstraintReport:
    """Scale-normalized residuals; ``satisfied`` is decided by the two DCons relations."""
    s = G.scale
    if s == 0:
        raise ValidationError("reduced coefficients are all zero")
    d1, d2 = dcons_values(G)
    FR4 = reduced_radicals(G).FR4
    n_plus = newcon_values(G, FR4)
    n_minus = newcon_values(G, -FR4)
    r1 = abs(d1) / s ** 3
    r2 = abs(d2) / s ** 4
    return ReducedConstraintReport(
        residual_single=abs(single_constraint_value(G)) / s ** 3,
        residual_dcons1=r1,
        residual_dcons2=r2,
        residual_newcon1=(abs(n_plus[0]) / s ** 3, abs(n_minus[0]) / s ** 3),
        residual_newcon2=(abs(n_plus[1]) / s ** 5, abs(n_minus[1]) / s ** 5),
        satisfied=max(r1, r2) < tol,
    )


# -- pair completions --------------------------------------------------------

Candidate = Tuple[str, Dict[str, complex], bool]


def _q(num: complex, den: complex) -> complex:
    """Quotient that turns a vanishing denominator into nan (candidate dropped later)."""
    return num / den if den != 0 else complex("nan")


def _signs(r: complex) -> Tuple[complex, complex]:
    return (r, -r)


def _ratio(g: Mapping[str, complex]) -> complex:
    if g["g23"] == 0:
        raise FormulaInapplicableError("G11/23 undefined (g23 = 0)")
    return cmath.sqrt(g["g11"] / g["g23"])


def _pair_g11_g23(g):
    g12, g13, g21, g22 = g["g12"], g["g13"], g["g21"], g["g22"]
    out = []
    for G1 in _signs(cmath.sqrt(g12 ** 2 + 4 * g13 * g21 - 2 * g12 * g22 + g22 ** 2)):
        out.append(("g11g23", {
            "g11": _q(g12 ** 2 + 2 * g13 * g21 - g12 * g22 + g12 * G1, 6 * g13),
            "g23": _q(2 * g13 * g21 - g12 * g22 + g22 ** 2 + g22 * G1, 6 * g21),
        }, False))
    return out


def _pair_g12_g22(g):
    return [("g12g22", {"g12": _q(-(3 * g["g11"] - g["g21"]), R),
                        "g22": (g["g13"] - 3 * g["g23"]) * R}, False)
            for R in _signs(_ratio(g))]


def _pair_g13_g21(g):
    return [("g13g21", {"g13": 3 * g["g23"] - _q(g["g22"], R),
                        "g21": 3 * g["g11"] - g["g12"] * R}, False)
            for R in _signs(_ratio(g))]


def _pair_g11_g12(g):
    g13, g21, g22, g23 = g["g13"], g["g21"], g["g22"], g["g23"]
    e = g13 - 3 * g23
    return [
        ("gga", {"g11": g21 / 3, "g12": 0j}, True),
        ("gga", {"g11": _q(g22 ** 2 * g23, e ** 2),
                 "g12": _q(g13 ** 2 * g21 - 6 * g13 * g21 * g23
                           - 3 * (g22 ** 2 * g23 - 3 * g21 * g23 ** 2), g22 * e)}, False),
    ]


def _pair_g11_g13(g):
    g12, g21, g22, g23 = g["g12"], g["g21"], g["g22"], g["g23"]
    return [("ggb", {"g11": _q(g12 ** 2 + 6 * g21 * g23 + g12 * G2, 18 * g23),
                     "g13": _q(g12 * g22 + 6 * g21 * g23 - g22 * G2, 2 * g21)}, False)
            for G2 in _signs(cmath.sqrt(g12 ** 2 + 12 * g21 * g23))]


def _pair_g11_g21(g):
    g12, g13, g22, g23 = g["g12"], g["g13"], g["g22"], g["g23"]
    e = g13 - 3 * g23
    return [("ggc", {"g11": _q(g22 ** 2 * g23, e ** 2),
                     "g21": _q(g22 * (g12 * e + 3 * g22 * g23), e ** 2)}, False)]


def _pair_g11_g22(g):
    g12, g13, g21, g23 = g["g12"], g["g13"], g["g21"], g["g23"]
    return [("ggd", {"g11": _q(6 * g21 * g23 + g12 * (g12 + G2), 18 * g23),
                     "g22": _q(-(g13 - 3 * g23) * (g12 + G2), 6 * g23)}, False)
            for G2 in _signs(cmath.sqrt(g12 ** 2 + 12 * g21 * g23))]


def _pair_g12_g13(g):
    # both signs of G11/23 are tried
    return [("gge", {"g12": _q(3 * g["g11"] - g["g21"], R),
                     "g13": 3 * g["g23"] - _q(g["g22"], R)}, False)
            for R in _signs(_ratio(g))]


def _pair_g12_g21(g):
    return [("ggf", {"g12": 0j, "g21": 3 * g["g11"]}, True)]




PAIR_FORMULAS: Dict[Tuple[str, str], Callable[[Mapping[str, complex]], List[Candidate]]] = {
    ("g11", "g23"): _pair_g11_g23,
    ("g12", "g22"): _pair_g12_g22,
    ("g13", "g21"): _pair_g13_g21,
    ("g11", "g12"): _pair_g11_g12,
    ("g11", "g13"): _pair_g11_g13,
    ("g11", "g21"): _pair_g11_g21,
    ("g11", "g22"): _pair_g11_g22,
    ("g12", "g13"): _pair_g12_g13,
    ("g12", "g21"): _pair_g12_g21,
}


def _normalize(pair: Sequence[str]) -> Tuple[str, str]:
    if len(pair) != 2 or pair[0] == pair[1] or any(p not in G_NAMES for p in pair):
        raise ValidationError(f"invalid reduced pair {pair!r}")
    p, q = sorted(pair, key=G_NAMES.index)
    return (p, q)


def reduced_pairs() -> List[Tuple[str, str]]:
    return list(itertools.combinations(G_NAMES, 2))


def reduced_pair_solve(known: Mapping[str, complex], pair: Sequence[str],
                       tol: float = DCONS_TOL) -> List[ReducedCompletion]:
    """Completions of ``pair`` from the four other reduced coefficients.

    Pairs without a direct formula are obtained by exchanging x1 and x2.
    Only completions satisfying both DCons relations are returned.
    """
    pair = _normalize(pair)
    given = {n: complex(known[n]) for n in G_NAMES if n not in pair and n in known}
    if len(given) != 4:
        raise ValidationError("four reduced coefficients are required",
                              {"missing": [n for n in G_NAMES if n not in pair and n not in known]})
    if pair in PAIR_FORMULAS:
        formula, mirrored = PAIR_FORMULAS[pair], False
    else:
        formula, mirrored = PAIR_FORMULAS[_normalize((G_SWAP[pair[0]], G_SWAP[pair[1]]))], True
    source = {G_SWAP[n]: v for n, v in given.items()} if mirrored else given
    try:
        with np.errstate(all="ignore"):
            raw = formula(source)
    except (ZeroDivisionError, FormulaInapplicableError) as e:
        raise FormulaInapplicableError(
            f"formula for {pair} is not applicable: {e}",
            {"pair": list(pair), "alternatives": "complete through the full system (complete_pair)"})

    found: List[ReducedCompletion] = []
    for label, values, special in raw:
        if mirrored:
            values = {G_SWAP[n]: v for n, v in values.items()}
            label = f"{label}~swap"
        G = ReducedCoefficients.from_dict({**given, **values}) if all(
            cmath.isfinite(v) for v in values.values()) else None
        if G is None:
            continue
        report = reduced_constraint_residuals(G, tol)
        if not report.satisfied:
            logger.debug(f"{pair}: {label} candidate fails DCons")
            continue
        if any(G.distance(f.coefficients) < 1e-10 * G.scale for f in found):
            continue
        found.append(ReducedCompletion(G, label, max(report.residual_dcons1, report.residual_dcons2),
                                       special))
    if not found:
        raise FormulaInapplicableError(f"no admissible completion of {pair}",
                                       {"pair": list(pair), "candidates": len(raw)})
    return found


# -- construction and inversion ------------------------------------------------

def reduced_parameters(a1: complex, a2: complex, b1: complex, b2: complex,
                       gamma1: complex) -> ParameterSet:
    """Parameters whose forward image has c14 = c21 = 0 (gamma2, gamma3 solved for)."""
    a1, a2, b1, b2, gamma1 = (complex(v) for v in (a1, a2, b1, b2, gamma1))
    M = np.array([[a1 ** 2 * b1, a1 ** 3], [a2 ** 2 * b2, a2 ** 3]], dtype=complex)
    rhs = np.array([a1 ** 2 * b1 - b1 ** 3 - gamma1 * a1 * b1 ** 2,
                    a2 ** 2 * b2 - b2 ** 3 - gamma1 * a2 * b2 ** 2], dtype=complex)
    try:
        gamma2, gamma3 = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as e:
        raise ValidationError("c14 = c21 = 0 cannot be imposed (a1 a2 c = 0)") from e
    return ParameterSet(a1, a2, b1, b2, gamma1, complex(gamma2), complex(gamma3))


def reduced_alpha(G: ReducedCoefficients) -> Optional[complex]:
    """g12/(3 g11 - g21), or the second rational form; None when both are 0/0."""
    g11, g12, g13, g21, g22, g23 = G.values()
    s = G.scale
    forms = [(g12, 3 * g11 - g21),
             (g13 * g22, g12 * g22 - g13 * g21 - g22 ** 2 + 3 * g21 * g23)]
    for k, (num, den) in enumerate(forms):
        if abs(den) > DETERMINATE * s ** (k + 1):
            return num / den
    return None


def reduced_invert(G: ReducedCoefficients) -> InversionResult:
    """Inversion specialised to c14 = c21 = 0 with a1 = sqrt(g11)."""
    if G.g11 == 0:
        raise ValidationError("g11 must not vanish")
    report = reduced_constraint_residuals(G)
    if not report.satisfied:
        raise ConstraintError("reduced coefficients violate the DCons relations", report.to_dict())
    C = to_full(G)
    full = constraint_residuals(C)
    if not full.satisfied:
        # the forward round trip in decompose decides
        logger.warning(f"DCons hold but the full constraints do not (worst {full.worst:.2e})")
    a1 = cmath.sqrt(G.g11)
    alpha = reduced_alpha(G)
    if alpha is not None:
        choices = [(alpha, a1, alpha * a1)]
    else:
        logger.warning("both reduced alpha forms are 0/0, trying a2 = +-sqrt(g23)")
        r = cmath.sqrt(G.g23)
        choices = [(a2 / a1, a1, a2) for a2 in (r, -r) if a2 != 0]
    return decompose(C, choices)
