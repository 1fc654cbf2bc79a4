"""
Completion of a coefficient set missing two of its eight entries.

Both constraints must hold on the completed set. Where a closed-form
expression of the pair exists it supplies candidates (the partner of a
closed-form member comes from the single-coefficient solutions). The
isolated solutions come from numerical elimination: the resultant of each
first-constraint form and the second constraint in one unknown is a
polynomial in the other. Every candidate is polished by Gauss-Newton on all
constraint forms, re-checked and deduplicated. Pairs whose solutions form a
curve (the column pairs c1l, c2l) are reported with a tangent direction.
"""
from __future__ import annotations

import cmath
import dataclasses
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from scripts.constraints.appendix import appendix_a_solve, appendix_b_solve
from scripts.constraints.residuals import (SATISFIED_TOL, alpha_parts, constraint_residuals,
                                           first_constraint_values, second_constraint_value)
from scripts.core.algebra import cube_roots
from scripts.core.errors import CompletionFailure, NumericalError, ValidationError
from scripts.core.model import COEFF_NAMES, SWAP, CoefficientSet

logger = logging.getLogger(__name__)

DEDUP_TOL = 1e-8
NEWTON_MAX_ITER = 60
POLISH_MAX_ITER = 8
SEED_COUNT = 16

Known = Dict[str, complex]
Candidate = Tuple[str, Dict[str, complex]]


@dataclass(frozen=True)
class Completion:
    coefficients: CoefficientSet
    source: str
    residual: float
    special: bool
    family: bool = False
    tangent: Optional[Tuple[complex, complex]] = None


def all_pairs() -> List[Tuple[str, str]]:
    return list(itertools.combinations(COEFF_NAMES, 2))


def _normalize_pair(pair: Sequence[str]) -> Tuple[str, str]:
    if len(pair) != 2 or pair[0] == pair[1] or any(p not in COEFF_NAMES for p in pair):
        raise ValidationError(f"invalid coefficient pair {pair!r}")
    p, q = sorted(pair, key=COEFF_NAMES.index)
    return (p, q)


# -- closed-form members ---------------------------------------------------

def _sqrt_pair(radicand: complex) -> Tuple[complex, complex]:
    r = cmath.sqrt(radicand)
    return (r, -r)


def _nested_cardano(p: complex, q: complex) -> List[complex]:
    """All values of 2^(1/3) q / X - 2^(-1/3) X with X^3 = p + sqrt(p^2 + 4 q^3)."""
    out = []
    for s in _sqrt_pair(p * p + 4 * q ** 3):
        for X in cube_roots(p + s):
            if X != 0:
                out.append(2 ** (1 / 3) * q / X - 2 ** (-1 / 3) * X)
    return out


def _cf_c11_c24(c: Known) -> List[Candidate]:
    c12, c13, c21, c22, c23 = c["c12"], c["c13"], c["c21"], c["c22"], c["c23"]
    out = []
    for R4 in _sqrt_pair((c12 - c23) ** 2 + 4 * c13 * c22):
        num = (2 * c13 * c22 ** 2 + (c12 - c23) * (c12 * c22 + 3 * c13 * c21)
               + R4 * (c12 * c22 - 3 * c13 * c21))
        out.append(("c11c24", {"c11": num / (6 * c13 * c22)}))
    return out


def _cf_c12_c23(c: Known) -> List[Candidate]:
    return [("c12c23a", {"c12": 3 * c["c14"] * (3 * c["c11"] - c["c22"]) / (c["c13"] - 3 * c["c24"])})]


def _cf_c14_c21(c: Known) -> List[Candidate]:
    e = 3 * c["c11"] - c["c22"]
    f = c["c13"] - 3 * c["c24"]
    return [("c14c21a", {"c14": c["c12"] * f / (3 * e), "c21": c["c23"] * e / (3 * f)})]


def _cf_c11_c12(c: Known) -> List[Candidate]:
    c13, c14, c21, c22, c23, c24 = c["c13"], c["c14"], c["c21"], c["c22"], c["c23"], c["c24"]
    out: List[Candidate] = [("c11c12a", {
        "c11": (c22 * c23 + 3 * c21 * (c13 - 3 * c24)) / (3 * c23),
        "c12": 9 * c14 * c21 / c23,
    })]
    for R1 in _sqrt_pair((c13 - 3 * c24) ** 2 + 12 * c14 * c23):
        num = (c13 * (c13 * c23 + 3 * c14 * c22 - 3 * c23 * c24)
               + 3 * c14 * (2 * c23 ** 2 - 3 * c22 * c24) + (3 * c14 * c22 - c13 * c23) * R1)
        out.append(("c11c12b", {"c12": num / (6 * c14 * c23)}))
    return out


def _cf_c11_c13(c: Known) -> List[Candidate]:
    c12, c14, c22, c23, c24 = c["c12"], c["c14"], c["c22"], c["c23"], c["c24"]
    A2 = (27 * c14 * c22 * (-9 * c14 * c22 ** 3 + 2 * c12 ** 2 * c22 * c23
                            - 3 * c12 * c22 * c23 ** 2 + 3 * c22 * c23 ** 3
                            + 3 * c22 ** 2 * c24 * (c12 + 3 * c23))
          - 9 * c12 * c22 * c23 ** 2 * c24 * (c12 + 3 * c23)
          + 27 * c22 ** 2 * c23 * c24 ** 2 * (c12 - 6 * c23)
          + 54 * (c22 * c24) ** 3 - 2 * (c12 * c23) ** 3)
    A3 = (9 * c14 * c22 ** 2 * (3 * c23 - c12) - c12 * c23 * (c12 * c23 + 3 * c22 * c24)
          - 9 * c22 * c24 * (c23 ** 2 + c22 * c24))
    return [("c11c13", {"c13": 2 * c24 + (c12 * c23 + v) / (3 * c22)})
            for v in _nested_cardano(A2, A3)]


def _cf_c11_c14(c: Known) -> List[Candidate]:
    c12, c13, c21, c22, c23, c24 = c["c12"], c["c13"], c["c21"], c["c22"], c["c23"], c["c24"]
    out: List[Candidate] = [("c11c14a", {
        "c11": (3 * c13 * c21 + c22 * c23 - 9 * c21 * c24) / (3 * c23),
        "c14": c12 * c23 / (9 * c21),
    })]
    k = c13 * c22 - c12 * c23 + c23 ** 2 - 3 * c22 * c24
    base = (c12 * c23 * (c12 - 2 * c23) + 3 * c22 * (c12 * c24 + c23 * (c13 - c24))
            - c12 * c13 * c22 + c23 ** 3)
    for R4 in _sqrt_pair((c12 - c23) ** 2 + 4 * c13 * c22):
        out.append(("c11c14b", {"c14": (base + k * R4) / (6 * c22 ** 2)}))
    return out


def _cf_c11_c21(c: Known) -> List[Candidate]:
    c12, c13, c14, c22, c23, c24 = c["c12"], c["c13"], c["c14"], c["c22"], c["c23"], c["c24"]
    return [("c11c21", {
        "c11": (c12 * c13 + 3 * c14 * c22 - 3 * c12 * c24) / (9 * c14),
        "c21": c12 * c23 / (9 * c14),
    })]


def _cf_c11_c22(c: Known) -> List[Candidate]:
    c12, c13, c14, c23, c24 = c["c12"], c["c13"], c["c14"], c["c23"], c["c24"]
    base = (c13 ** 3 + 3 * c14 * (-c12 * c13 + 3 * c13 * c23 + 3 * c12 * c24 - 3 * c23 * c24)
            + 3 * c13 * c24 * (3 * c24 - 2 * c13))
    k = c13 * (c13 - 3 * c24) - 3 * c14 * (c12 - c23)
    return [("c11c22", {"c22": (base + k * R1) / (18 * c14 ** 2)})
            for R1 in _sqrt_pair((c13 - 3 * c24) ** 2 + 12 * c14 * c23)]


def _cf_c11_c23(c: Known) -> List[Candidate]:
    c12, c13, c14, c21, c22, c24 = c["c12"], c["c13"], c["c14"], c["c21"], c["c22"], c["c24"]
    return [("c11c23a", {
        "c11": (c12 * c13 + 3 * (c14 * c22 - c12 * c24)) / (9 * c14),
        "c23": 9 * c14 * c21 / c12,
    })]


def _cf_c12_c13(c: Known) -> List[Candidate]:
    c11, c14, c21, c22, c23, c24 = c["c11"], c["c14"], c["c21"], c["c22"], c["c23"], c["c24"]
    return [("c12c13a", {
        "c12": 9 * c14 * c21 / c23,
        "c13": (3 * c11 * c23 - c22 * c23 + 9 * c21 * c24) / (3 * c21),
    })]


def _cf_c12_c21(c: Known) -> List[Candidate]:
    c11, c13, c14, c22, c23, c24 = c["c11"], c["c13"], c["c14"], c["c22"], c["c23"], c["c24"]
    f = c13 - 3 * c24
    out: List[Candidate] = [("c12c21a", {
        "c12": (9 * c11 * c14 - 3 * c14 * c22) / f,
        "c21": (3 * c11 * c23 - c22 * c23) / (3 * f),
    })]
    for R1 in _sqrt_pair(f ** 2 + 12 * c14 * c23):
        num = f * (c13 * c23 + 3 * c14 * c22) + 6 * c14 * c23 ** 2 + (3 * c14 * c22 - c13 * c23) * R1
        out.append(("c12c21b", {"c12": num / (6 * c14 * c23)}))
    return out


def _cf_c12_c22(c: Known) -> List[Candidate]:
    c11, c13, c14, c21, c23, c24 = c["c11"], c["c13"], c["c14"], c["c21"], c["c23"], c["c24"]
    return [("c12c22", {
        "c12": 9 * c14 * c21 / c23,
        "c22": 3 * (c11 * c23 - c13 * c21 + 3 * c21 * c24) / c23,
    })]


def _cf_c13_c14(c: Known) -> List[Candidate]:
    c11, c12, c21, c22, c23 = c["c11"], c["c12"], c["c21"], c["c22"], c["c23"]
    return [("c13c14a", {
        "c13": (3 * c11 * c23 - c22 * c23) / (3 * c21),
        "c14": c12 * c23 / (9 * c21),
    })]


def _cf_c13_c21(c: Known) -> List[Candidate]:
    c11, c12, c14, c22, c23, c24 = c["c11"], c["c12"], c["c14"], c["c22"], c["c23"], c["c24"]
    return [("c13c21a", {
        "c13": 3 * (3 * c11 * c14 + c12 * c24 - c14 * c22) / c12,
        "c21": c12 * c23 / (9 * c14),
    })]


CLOSED_FORMS: Dict[Tuple[str, str], Callable[[Known], List[Candidate]]] = {
    ("c11", "c24"): _cf_c11_c24,
    ("c12", "c23"): _cf_c12_c23,
    ("c14", "c21"): _cf_c14_c21,
    ("c11", "c12"): _cf_c11_c12,
    ("c11", "c13"): _cf_c11_c13,
    ("c11", "c14"): _cf_c11_c14,
    ("c11", "c21"): _cf_c11_c21,
    ("c11", "c22"): _cf_c11_c22,
    ("c11", "c23"): _cf_c11_c23,
    ("c12", "c13"): _cf_c12_c13,
    ("c12", "c21"): _cf_c12_c21,
    ("c12", "c22"): _cf_c12_c22,
    ("c13", "c14"): _cf_c13_c14,
    ("c13", "c21"): _cf_c13_c21,
}
# (c12, c14), (c13, c22) and the radical branches of (c11, c23), (c13, c14),
# (c12, c23), (c14, c21), (c12, c13), (c13, c21) come from elimination only.


def _closed_form_candidates(known: Known, pair: Tuple[str, str]) -> List[Candidate]:
    if pair in CLOSED_FORMS:
        fn, mapping = CLOSED_FORMS[pair], None
    else:
        mirrored = _normalize_pair((SWAP[pair[0]], SWAP[pair[1]]))
        if mirrored not in CLOSED_FORMS:
            return []
        fn, mapping = CLOSED_FORMS[mirrored], SWAP
    source = known if mapping is None else {SWAP[n]: v for n, v in known.items()}
    try:
        with np.errstate(all="ignore"):
            raw = fn(source)
    except ZeroDivisionError:
        logger.debug(f"closed form for {pair} not applicable (vanishing denominator)")
        return []
    if mapping is None:
        return raw
    return [(f"{label}~swap", {SWAP[n]: v for n, v in values.items()}) for label, values in raw]


def _partner_values(known: Known, pair: Tuple[str, str], values: Dict[str, complex]) -> List[Dict[str, complex]]:
    """Complete a single closed-form member through the single-coefficient solutions."""
    if len(values) == 2:
        return [values]
    (have, v), = values.items()
    partner = pair[1] if have == pair[0] else pair[0]
    trial = CoefficientSet.from_dict({**known, have: v, partner: 0})
    out = []
    for solver in (appendix_a_solve, appendix_b_solve):
        try:
            out.extend({have: v, partner: p} for p in solver(trial, partner))
        except NumericalError:
            continue
    return out


def closed_form_starts(known: Mapping[str, complex], pair: Sequence[str]) -> List[Tuple[str, Tuple[complex, complex]]]:
    """Unpolished (label, values) starts from the closed-form table, mirrors included."""
    pair = _normalize_pair(pair)
    given = {n: complex(known[n]) for n in COEFF_NAMES if n not in pair}
    out = []
    for label, values in _closed_form_candidates(given, pair):
        for full in _partner_values(given, pair, values):
            z = (complex(full[pair[0]]), complex(full[pair[1]]))
            if all(math.isfinite(x) for x in (z[0].real, z[0].imag, z[1].real, z[1].imag)):
                out.append((label, z))
    return out


# -- Gauss-Newton on the constraint forms ------------------------------------

def _assemble(known: Known, pair: Tuple[str, str], z: np.ndarray) -> CoefficientSet:
    d = dict(known)
    d[pair[0]] = complex(z[0])
    d[pair[1]] = complex(z[1])
    return CoefficientSet.from_dict(d)


def _system(known: Known, pair: Tuple[str, str], scale: float, avatar: Optional[int] = None):
    """Constraint values in the pair; ``avatar=None`` stacks all three first-constraint forms."""
    def F(z: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(z)):
            return np.full(4 if avatar is None else 2, np.nan, dtype=complex)
        C = _assemble(known, pair, z)
        first = first_constraint_values(C)
        rows = first if avatar is None else (first[avatar],)
        return np.array([*rows, second_constraint_value(C)], dtype=complex) / scale ** 4
    return F


def _jacobian(F, z: np.ndarray, h: float) -> np.ndarray:
    cols = []
    for k in range(2):
        dz = np.zeros(2, dtype=complex)
        dz[k] = h
        cols.append((F(z + dz) - F(z - dz)) / (2 * h))
    return np.column_stack(cols)


def newton_pair(known: Known, pair: Tuple[str, str], seed: Tuple[complex, complex],
                scale: float, avatar: Optional[int] = None,
                max_iter: int = NEWTON_MAX_ITER) -> np.ndarray:
    """Damped Gauss-Newton for the missing pair, starting from ``seed``.

    With ``avatar=None`` the three first-constraint forms and the second
    constraint are solved together in the least-squares sense.
    """
    F = _system(known, pair, scale, avatar)
    z = np.array(seed, dtype=complex)
    h = 1e-6 * scale
    f = F(z)
    for _ in range(max_iter):
        norm = np.linalg.norm(f)
        if norm < 1e-15:
            break
        step = np.linalg.lstsq(_jacobian(F, z, h), -f, rcond=None)[0]
        if np.linalg.norm(step) < 1e-14 * scale:
            z = z + step
            break
        lam = 1.0
        while lam >= 1e-4:
            trial = z + lam * step
            f_trial = F(trial)
            if np.linalg.norm(f_trial) < norm:
                break
            lam /= 2
        else:
            break
        z, f = trial, f_trial
    return z


def newton_seeds(scale: float) -> List[Tuple[complex, complex]]:
    """Deterministic grid: four directions per unknown, alternating magnitudes."""
    directions = [cmath.exp(1j * math.pi * (2 * m + 1) / 4) for m in range(4)]
    seeds = []
    for j, k in itertools.product(range(4), range(4)):
        factor = 0.5 if (j + k) % 2 else 1.5
        seeds.append((scale * directions[j], factor * scale * directions[k]))
    return seeds[:SEED_COUNT]


# -- elimination ---------------------------------------------------------------

# every constraint form has degree at most four in any single coefficient
MAX_DEGREE = 4
ELIMINATION_SAMPLES = 64
RESULTANT_ZERO_TOL = 1e-12
ELIMINATION_ACCEPT = 1e-4
_NODES = np.exp(2j * np.pi * np.arange(MAX_DEGREE + 1) / (MAX_DEGREE + 1))
_REFERENCE = 0.83 * cmath.exp(0.61j)


def _coefficients_in_first(Fw, w2: complex) -> np.ndarray:
    """Ascending coefficients in the first unknown, one column per equation."""
    vals = np.array([Fw(np.array([w, w2])) for w in _NODES])
    return np.fft.fft(vals, axis=0) / len(_NODES)


def _degree(a: np.ndarray, rel: float = 1e-11) -> int:
    big = float(np.max(np.abs(a))) if len(a) else 0.0
    if big == 0.0:
        return -1
    return int(np.nonzero(np.abs(a) > rel * big)[0][-1])


def _sylvester(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two polynomials given by ascending coefficients."""
    m, n = len(p) - 1, len(q) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i:i + m + 1] = p[::-1]
    for i in range(m):
        S[n + i, i:i + n + 1] = q[::-1]
    return S


def eliminate(known: Known, pair: Tuple[str, str], scale: float) -> Tuple[List[Tuple[complex, complex]], bool]:
    """Candidate pairs from resultants in the first unknown.

    Each first-constraint form is paired with the second constraint. The
    resultant is sampled on the unit circle of the scaled second unknown and
    interpolated by FFT; its roots give the second unknown, and the common
    roots of the two equations at that value give the first. The flag is
    False when every resultant vanishes identically (no isolated solutions).
    """
    F = _system(known, pair, scale)

    def Fw(w: np.ndarray) -> np.ndarray:
        return F(np.asarray(w, dtype=complex) * scale)

    with np.errstate(all="ignore"):
        ref = _coefficients_in_first(Fw, _REFERENCE)
        degrees = [_degree(ref[:, e]) for e in range(4)]
        samples = np.exp(2j * np.pi * np.arange(ELIMINATION_SAMPLES) / ELIMINATION_SAMPLES)
        table = [_coefficients_in_first(Fw, w2) for w2 in samples]

    n = degrees[3]
    informative = False
    roots_w: List[Tuple[complex, complex]] = []
    for e in range(3):
        m = degrees[e]
        if m < 0 or n < 0 or m + n == 0:
            continue
        dets = np.empty(len(samples), dtype=complex)
        ratio = 0.0
        for k, coeffs in enumerate(table):
            S = _sylvester(coeffs[:m + 1, e], coeffs[:n + 1, 3])
            dets[k] = np.linalg.det(S)
            bound = float(np.prod(np.linalg.norm(S, axis=1)))
            if bound > 0:
                ratio = max(ratio, abs(dets[k]) / bound)
        if not np.all(np.isfinite(dets)) or ratio < RESULTANT_ZERO_TOL:
            logger.debug(f"{pair}: resultant of form {e} vanishes identically")
            continue
        informative = True
        r = np.fft.fft(dets) / len(samples)
        deg = _degree(r, 1e-10)
        if deg <= 0:
            continue
        for w2 in np.roots(r[:deg + 1][::-1]):
            if not np.isfinite(w2) or abs(w2) > 1e6:
                continue
            with np.errstate(all="ignore"):
                coeffs = _coefficients_in_first(Fw, w2)
            if not np.all(np.isfinite(coeffs)):
                continue
            firsts = list(np.roots(coeffs[:m + 1, e][::-1])) + list(np.roots(coeffs[:n + 1, 3][::-1]))
            for w1 in firsts:
                if not np.isfinite(w1) or abs(w1) > 1e6:
                    continue
                size = max(1.0, abs(w1), abs(w2)) ** MAX_DEGREE
                with np.errstate(all="ignore"):
                    vals = Fw(np.array([w1, w2]))
                if np.all(np.isfinite(vals)) and np.max(np.abs(vals)) < ELIMINATION_ACCEPT * size:
                    if not any(abs(w1 - a) + abs(w2 - b) < 1e-6 * size for a, b in roots_w):
                        roots_w.append((complex(w1), complex(w2)))
    return [(a * scale, b * scale) for a, b in roots_w], informative


# -- driver ------------------------------------------------------------------

FAMILY_RANK_TOL = 1e-8


def _accept(C: CoefficientSet, tol: float) -> Optional[float]:
    report = constraint_residuals(C, tol)
    return report.worst if report.satisfied else None


def _is_special(C: CoefficientSet) -> bool:
    (_, _), (_, _), (nc, _) = alpha_parts(C)
    return abs(nc) < 1e-9 * C.scale ** 2


def family_tangent(known: Known, pair: Tuple[str, str], z: np.ndarray,
                   scale: float) -> Tuple[bool, Optional[Tuple[complex, complex]]]:
    """Whether the solution at ``z`` lies on a curve of solutions, and its direction.

    The Jacobian of all constraint forms in the pair has rank one along such a
    curve; its null vector (largest component scaled to 1) is the tangent.
    """
    F = _system(known, pair, scale)
    with np.errstate(all="ignore"):
        J = _jacobian(F, np.asarray(z, dtype=complex), 1e-6 * scale) * scale
    if not np.all(np.isfinite(J)):
        return False, None
    _, s, vh = np.linalg.svd(J)
    if s[0] < 1e-12:
        return True, None
    if s[1] > FAMILY_RANK_TOL * s[0]:
        return False, None
    t = vh[-1].conj()
    t = t / t[int(np.argmax(np.abs(t)))]
    return True, (complex(t[0]), complex(t[1]))


def _polish(given: Known, pair: Tuple[str, str], label: str, start: Tuple[complex, complex],
            scale: float, tol: float):
    if label == "elimination":
        plan = [(None, NEWTON_MAX_ITER)]
    elif label in ("newton", "hint"):
        plan = [(None, NEWTON_MAX_ITER), (0, NEWTON_MAX_ITER), (1, NEWTON_MAX_ITER), (2, NEWTON_MAX_ITER)]
    else:
        plan = [(None, POLISH_MAX_ITER), (0, POLISH_MAX_ITER), (1, POLISH_MAX_ITER), (2, POLISH_MAX_ITER)]
    for avatar, max_iter in plan:
        with np.errstate(all="ignore"):
            z = newton_pair(given, pair, start, scale, avatar, max_iter)
        if not np.all(np.isfinite(z)):
            continue
        C = _assemble(given, pair, z)
        worst = _accept(C, tol)
        if worst is not None:
            return C, worst, z
    return None


def _on_known_family(z: np.ndarray, found: List["Completion"], pair: Tuple[str, str], scale: float) -> bool:
    for f in found:
        if f.tangent is None:
            continue
        d0 = z[0] - f.coefficients.as_dict()[pair[0]]
        d1 = z[1] - f.coefficients.as_dict()[pair[1]]
        if abs(d0 * f.tangent[1] - d1 * f.tangent[0]) < 1e-6 * scale:
            return True
    return False


def complete_pair(known: Mapping[str, complex], pair: Sequence[str],
                  hints: Sequence[Tuple[complex, complex]] = (),
                  tol: float = SATISFIED_TOL) -> List[Completion]:
    """All completions of ``pair`` compatible with the six known coefficients.

    ``known`` may also contain the pair itself; those two values are ignored.
    Starts come from the closed forms, the hints and elimination; the fixed
    seed grid is used when elimination has nothing to offer (a curve of
    solutions) or nothing was accepted. Raises CompletionFailure when no
    start converges.
    """
    pair = _normalize_pair(pair)
    given = {n: complex(known[n]) for n in COEFF_NAMES if n not in pair and n in known}
    if len(given) != 6:
        missing = [n for n in COEFF_NAMES if n not in pair and n not in known]
        raise ValidationError(f"missing coefficients for completion: {missing}")
    scale = max(abs(v) for v in given.values()) or 1.0

    attempts: List[Tuple[str, Tuple[complex, complex]]] = closed_form_starts(given, pair)
    attempts.extend(("hint", (complex(h[0]), complex(h[1]))) for h in hints)
    eliminated, informative = eliminate(given, pair, scale)
    attempts.extend(("elimination", z) for z in eliminated)

    found: List[Completion] = []

    def run(batch: Sequence[Tuple[str, Tuple[complex, complex]]]) -> None:
        for label, start in batch:
            polished = _polish(given, pair, label, start, scale, tol)
            if polished is None:
                logger.debug(f"{pair}: start {label} did not converge")
                continue
            C, worst, z = polished
            moved = max(abs(z[0] - start[0]), abs(z[1] - start[1])) > 1e-6 * scale
            exact = not moved and label not in ("newton", "hint", "elimination")
            same = [i for i, f in enumerate(found) if C.distance(f.coefficients) < DEDUP_TOL * scale]
            if same:
                i = same[0]
                # an exact closed form takes over a point a Newton start reached first
                if exact and found[i].source.startswith("newton("):
                    found[i] = dataclasses.replace(found[i], source=label)
                continue
            if _on_known_family(z, found, pair, scale):
                continue
            source = label if exact or label in ("newton", "hint", "elimination") else f"newton({label})"
            family, tangent = family_tangent(given, pair, z, scale)
            found.append(Completion(C, source, worst, _is_special(C), family, tangent))

    run(attempts)
    if not informative or not found:
        seeds = [("newton", s) for s in newton_seeds(scale)]
        attempts.extend(seeds)
        run(seeds)

    if not found:
        raise CompletionFailure(
            f"no completion of {pair[0]}, {pair[1]} found",
            {"pair": list(pair), "seeds_tried": [[[s[0].real, s[0].imag], [s[1].real, s[1].imag]]
                                                 for _, s in attempts]})
    found.sort(key=lambda f: (f.residual, round(f.coefficients.as_dict()[pair[0]].real, 9),
                              f.coefficients.as_dict()[pair[0]].imag))
    if any(f.family for f in found):
        logger.warning(f"{pair}: the completions form a one-parameter family")
    logger.info(f"{pair}: {len(found)} completion(s) from {len(attempts)} starts")
    return found
