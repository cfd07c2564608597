"""Index-4 Gauss sums for N = p1^m, p1 = 5 (mod 8).

The Gauss sum of an order-N character, divided by the right power of p, is
an integer combination N0 eta0 + ... + N3 eta3 of the four quartic periods
mod p1.  The coordinates satisfy a small Diophantine system in the
transformed variables M0..M3; enumerating its solutions bounds, and for two
families pins down, the restricted spectrum of Cay(F_q, D).
"""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from sympy import isprime

from . import kernels
from .arith import index4_conditions, is_square, primitive_root_lifted
from .cyclotomy import CycInt

ETA_TOL = 1e-9

# projective ratio targets for the two srg families
RATIOS_P1_MINUS_1 = ((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1))
RATIOS_P1_MINUS_9 = ((3, -1, -1, -1), (3, -1, 1, 1), (3, 1, -1, 1), (3, 1, 1, -1))
FAMILY_P1_MINUS_1 = "p1-1 square"
FAMILY_P1_MINUS_9 = "p1-9 square"


class Index4Error(ValueError):
    """(p, p1) does not satisfy the index-4 hypotheses."""

    def __init__(self, p, p1, failed):
        self.p, self.p1, self.failed = p, p1, list(failed)
        super().__init__(f"(p={p}, p1={p1}) violates: " + "; ".join(self.failed))


class Undecided(Exception):
    """The Diophantine search was not run to completion; never a silent skip."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class InconsistentSystem(ArithmeticError):
    """No integer solution: impossible for a genuine Gauss sum."""


# ---------------------------------------------------------------------------
# quartic data
# ---------------------------------------------------------------------------

def two_squares_normalized(p1: int) -> list:
    """All (A, B) with A^2 + B^2 = p1, A = 3 mod 4, B > 0."""
    out = []
    r = isqrt(p1)
    for A in range(-r, r + 1):
        if A % 4 != 3:
            continue
        rest = p1 - A * A
        if rest > 0 and is_square(rest):
            out.append((A, isqrt(rest)))
    return out


def quartic_classes(p1: int, g: int) -> tuple:
    """C~_j = g^j * H for the index-4 subgroup H of Z_p1^*."""
    ft = (p1 - 1) // 4
    H = sorted({pow(g, 4 * k, p1) for k in range(ft)})
    return tuple(tuple(sorted(pow(g, j, p1) * h % p1 for h in H)) for j in range(4))


@dataclass(frozen=True)
class QuarticData:
    p1: int
    p: int
    g: int
    ftilde: int
    classes: tuple = field(repr=False)
    b_list: tuple
    b: int
    lam: int       # first index attaining the minimum b
    c: int         # recorded only
    A: int
    B: int

    @property
    def exponent(self) -> int:
        """ftilde - 2b, the power of p in the norm relation."""
        return self.ftilde - 2 * self.b

    def to_json(self) -> dict:
        return {"p": self.p, "p1": self.p1, "g": self.g, "ftilde": self.ftilde,
                "b_list": list(self.b_list), "b": self.b, "c": self.c,
                "A": self.A, "B": self.B}


def quartic_decomposition(p1: int, p: int) -> QuarticData:
    if not (isprime(p) and isprime(p1)) or p == p1:
        raise ValueError("p and p1 must be distinct primes")
    conds = index4_conditions(p, p1)
    failed = [name for name, ok in conds.items() if not ok]
    if failed:
        raise Index4Error(p, p1, failed)
    g = primitive_root_lifted(p1)
    ft = (p1 - 1) // 4
    classes = quartic_classes(p1, g)
    # <p> must be C~_0
    if set(classes[0]) != {pow(p, k, p1) for k in range(ft)}:
        raise Index4Error(p, p1, ["<p> is not the index-4 subgroup"])
    b_list = []
    for cls in classes:
        s = sum(cls)
        if s % p1:
            raise ArithmeticError(f"class sum {s} not divisible by {p1}")
        b_list.append(s // p1)
    b = min(b_list)
    lam = b_list.index(b)
    c = min(b_list[(lam + 1) % 4] - b, b_list[(lam + 3) % 4] - b)
    ab = two_squares_normalized(p1)
    if len(ab) != 1:
        raise ArithmeticError(f"p1={p1}: expected a unique (A, B), found {ab}")
    (A, B), = ab
    return QuarticData(p1, p, g, ft, classes, tuple(b_list), b, lam, c, A, B)


# ---------------------------------------------------------------------------
# eta basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaBasis:
    p1: int
    g: int
    A: int
    symbolic: tuple = field(repr=False)
    numeric: tuple = field(repr=False)
    closed_form: tuple = field(repr=False)  # matched closed-form value for each eta_j
    branch: tuple                           # '+' or '-' of the i*sqrt(2) term for each eta_j
    max_error: float

    @property
    def conjugated(self) -> bool:
        """True when eta0 sits on the '-' branch, i.e. opposite to the usual normalization."""
        return self.branch[0] == "-"


def _closed_forms(p1, A):
    r = math.sqrt(p1)
    s0 = math.sqrt(2) * math.sqrt(p1 - A * r)
    s1 = math.sqrt(2) * math.sqrt(p1 + A * r)
    even = {"+": complex(-1 + r, s0) / 4, "-": complex(-1 + r, -s0) / 4}
    odd = {"+": complex(-1 - r, s1) / 4, "-": complex(-1 - r, -s1) / 4}
    return even, odd


def eta_values(p1: int, g: int | None = None) -> EtaBasis:
    if p1 % 8 != 5 or not isprime(p1):
        raise ValueError("p1 must be a prime = 5 (mod 8)")
    g = primitive_root_lifted(p1) if g is None else g
    classes = quartic_classes(p1, g)
    symbolic = []
    for cls in classes:
        raw = [0] * p1
        for a in cls:
            raw[a] = 1
        symbolic.append(CycInt.from_raw(p1, raw))
    numeric = tuple(sum(cmath.exp(2j * math.pi * a / p1) for a in cls) for cls in classes)
    (A, _), = two_squares_normalized(p1)
    even, odd = _closed_forms(p1, A)
    matched, branch, err = [], [], 0.0
    for j, z in enumerate(numeric):
        forms = even if j % 2 == 0 else odd
        sign = min(forms, key=lambda s: abs(forms[s] - z))
        matched.append(forms[sign])
        branch.append(sign)
        err = max(err, abs(forms[sign] - z))
    return EtaBasis(p1, g, A, tuple(symbolic), numeric, tuple(matched), tuple(branch), err)


def eta_identities(eta: EtaBasis) -> dict:
    """The exact symmetric identities, each as (computed CycInt, expected int)."""
    e = eta.symbolic
    p1 = eta.p1
    total = e[0] + e[1] + e[2] + e[3]
    squares = sum((x * x for x in e[1:]), e[0] * e[0])
    adjacent = sum((e[j] * e[(j + 1) % 4] for j in range(1, 4)), e[0] * e[1])
    opposite = sum((e[j] * e[(j + 2) % 4] for j in range(1, 4)), e[0] * e[2])
    return {
        "sum": (total, -1),
        "sum_squares": (squares, (1 - p1) // 4),
        "sum_adjacent": (adjacent, (1 - p1) // 4),
        "sum_opposite": (opposite, (1 + 3 * p1) // 4),
    }


# ---------------------------------------------------------------------------
# the M-system
# ---------------------------------------------------------------------------

def n_from_m(M) -> tuple:
    M0, M1, M2, M3 = M
    four = (M0 + M1 + M2 + M3, M0 + M1 - M2 - M3, M0 - M1 + M2 - M3, M0 - M1 - M2 + M3)
    if any(x % 4 for x in four):
        raise ValueError(f"{M} does not map to integral N")
    return tuple(x // 4 for x in four)


def m_from_n(N) -> tuple:
    N0, N1, N2, N3 = N
    return (N0 + N1 + N2 + N3, N0 + N1 - N2 - N3, N0 - N1 + N2 - N3, N0 - N1 - N2 + N3)


@dataclass(frozen=True)
class MSolution:
    M: tuple
    N: tuple
    B_signs: tuple   # which of +B, -B satisfy the bilinear relation

    def to_json(self) -> dict:
        return {"M": list(self.M), "N": list(self.N), "B_signs": list(self.B_signs)}


def m_relations(M, p: int, qd: QuarticData, B: int | None = None) -> dict:
    """Truth value of each of the five relations for a candidate quadruple."""
    M0, M1, M2, M3 = M
    p1 = qd.p1
    B = qd.B if B is None else B
    return {
        "norm": 16 * p ** qd.exponent == M0 * M0 + p1 * (M1 * M1 + M2 * M2 + M3 * M3),
        "bilinear": 2 * M0 * M2 + 2 * qd.A * M1 * M3 == B * (M1 * M1 - M3 * M3),
        "sum mod 4": (M0 + M1 + M2 + M3) % 4 == 0,
        "parity": M1 % 2 == M2 % 2 == M3 % 2,
        "M0 residue": (M0 - 4 * pow(p, -qd.b, p1)) % p1 == 0,
    }


def _make_solution(M, p, qd):
    signs = tuple(s for s in (1, -1) if all(m_relations(M, p, qd, s * qd.B).values()))
    if not signs:
        return None
    return MSolution(tuple(M), n_from_m(M), signs)


def system_size(p: int, qd: QuarticData, limit: int | None = None):
    """(target, M0 candidates, lattice points to visit).

    Counting stops once ``limit`` is passed; the work returned is then the
    closed-form estimate 4 pi T^(3/2) / (3 p1^2) of the full sum.
    """
    target = 16 * p ** qd.exponent
    residue = 4 * pow(p, -qd.b, qd.p1) % qd.p1
    lim = isqrt(target)
    start = -lim + (residue + lim) % qd.p1
    m0s = range(start, lim + 1, qd.p1)
    work = 0
    for M0 in m0s:
        rest = target - M0 * M0
        if rest % qd.p1 == 0:
            work += kernels.three_squares_work(rest // qd.p1)
        if limit is not None and work > limit:
            est = int(4 * math.pi * float(target) ** 1.5 / (3 * qd.p1 ** 2))
            return target, m0s, max(work, est)
    return target, m0s, work


def solve_m_system(p: int, p1: int, qd: QuarticData | None = None, *, guard_bits: int = 64,
                   work_limit: int = 200_000_000, use_numba=None) -> list:
    """Every integer (M0..M3) satisfying all five relations, for B or -B, sorted."""
    qd = quartic_decomposition(p1, p) if qd is None else qd
    target = 16 * p ** qd.exponent
    if target.bit_length() > guard_bits:
        raise Undecided(f"16*p^{qd.exponent} has {target.bit_length()} bits > guard {guard_bits}")
    _, m0s, work = system_size(p, qd, work_limit)
    if work > work_limit:
        raise Undecided(f"three-squares search needs ~{work} lattice points > limit {work_limit}")
    sols = []
    for M0 in m0s:
        rest = target - M0 * M0
        if rest % p1:
            continue
        for M1, M2, M3 in kernels.three_squares(rest // p1, use_numba=use_numba).tolist():
            sol = _make_solution((M0, M1, M2, M3), p, qd)
            if sol is not None:
                sols.append(sol)
    sols.sort(key=lambda s: s.M)
    for s in sols:
        if not all(m_relations(s.M, p, qd, s.B_signs[0] * qd.B).values()):
            raise AssertionError(f"solution {s.M} fails a relation")
        if not any(s.N):
            raise InconsistentSystem(f"solution {s.M} would make the Gauss sum vanish")
    if not sols:
        raise InconsistentSystem(f"no integer solution for (p={p}, p1={p1})")
    return sols


def srg_ratio_candidates(p: int, p1: int, qd: QuarticData | None = None) -> list:
    """Solutions of the system lying on one of the eight srg ratio lines.

    On a line M = t * v the norm relation fixes t^2 = 16 p^e / |v|, so this
    costs O(1) regardless of the size of p^e.
    """
    qd = quartic_decomposition(p1, p) if qd is None else qd
    target = 16 * p ** qd.exponent
    out = []
    for v in RATIOS_P1_MINUS_1 + RATIOS_P1_MINUS_9:
        weight = v[0] ** 2 + p1 * (v[1] ** 2 + v[2] ** 2 + v[3] ** 2)
        if target % weight or not is_square(target // weight):
            continue
        t = isqrt(target // weight)
        for tt in (t, -t):
            sol = _make_solution(tuple(tt * x for x in v), p, qd)
            if sol is not None:
                out.append(sol)
    return sorted(out, key=lambda s: s.M)


# ---------------------------------------------------------------------------
# T-profiles and the classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TProfile:
    values: tuple     # (T1, ..., T5): j_a = 0, then j_a in C~_0 .. C~_3

    @property
    def distinct_count(self) -> int:
        return len(set(self.values))


def t_profile(sol: MSolution, p1: int) -> TProfile:
    base = (1 - p1) // 4 * sol.M[0]
    prof = TProfile((base,) + tuple(base + p1 * n for n in sol.N))
    if prof.distinct_count < 2:
        raise InconsistentSystem("all T equal forces N = 0")
    return prof


def _proportional(M, v) -> bool:
    if not any(M):
        return False
    return all(M[i] * v[j] == M[j] * v[i] for i in range(4) for j in range(4))


def matched_ratio(M, targets):
    for v in targets:
        if _proportional(M, v):
            return v
    return None


@dataclass(frozen=True)
class Verdict:
    is_srg: bool
    case_family: str | None
    ratios: tuple            # matched target per solution, None where unmatched
    status: str              # "srg", "not srg", "ambiguous"
    basis: str

    def to_json(self) -> dict:
        return {"is_srg": self.is_srg, "case_family": self.case_family,
                "ratios": [list(r) if r else None for r in self.ratios],
                "status": self.status, "basis": self.basis}


def square_family(p1: int):
    if is_square(p1 - 1):
        return FAMILY_P1_MINUS_1, RATIOS_P1_MINUS_1
    if is_square(p1 - 9):
        return FAMILY_P1_MINUS_9, RATIOS_P1_MINUS_9
    return None, ()


def classify_srg(p1: int, sols) -> Verdict:
    sols = list(sols)
    if not sols:
        raise ValueError("classification needs at least one solution")
    family, targets = square_family(p1)
    ratios = tuple(matched_ratio(s.M, targets) for s in sols)
    if family is None:
        return Verdict(False, None, ratios, "not srg",
                       "necessary condition: neither p1-1 nor p1-9 is a square")
    matched = [r is not None for r in ratios]
    basis = f"index-4 ratio classification, {family} family"
    if all(matched):
        return Verdict(True, family, ratios, "srg", basis)
    if any(matched):
        return Verdict(False, family, ratios, "ambiguous",
                       basis + "; solutions disagree, direct verification required")
    return Verdict(False, family, ratios, "not srg", basis)


def predicted_spectrum(p: int, p1: int, m: int, sol: MSolution, qd: QuarticData | None = None) -> dict:
    """{restricted eigenvalue: number of classes a in Z_N} implied by one solution."""
    qd = quartic_decomposition(p1, p) if qd is None else qd
    ft = qd.ftilde
    f = p1 ** (m - 1) * ft
    E = (f - ft) // 2 + qd.b
    scale = p ** E
    weights = (p1 ** (m - 1),) + (ft * p1 ** (m - 1),) * 4
    out = Counter()
    for T, w in zip(t_profile(sol, p1).values, weights):
        num = -1 + scale * T
        if num % p1:
            raise ArithmeticError(f"non-integral eigenvalue {Fraction(num, p1)}")
        out[num // p1] += w
    return dict(sorted(out.items(), key=lambda t: -t[0]))

