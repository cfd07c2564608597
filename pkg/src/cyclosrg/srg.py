"""Strongly regular graph checks and parameters.

Two independent routes decide strong regularity of Cay(F_q, D): the
adjacency identity A^2 = (lam - mu) A + (k - mu) I + mu J checked on the full
matrix, and the count of distinct restricted eigenvalues from the exact
period histogram.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import gmpy2
import numpy as np

from . import kernels
from .config import Budgets, BudgetExceeded
from .cyclotomy import (ConnectionSet, TraceHistogram, is_symmetric, restricted_eigenvalues)
from .field import FieldSpec


class NotSrgInput(ValueError):
    """Complete or edgeless graph, or otherwise outside the srg definition."""


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int
    r: int | None     # None when the restricted eigenvalues are irrational
    s: int | None
    f1: int
    f2: int

    def __post_init__(self):
        problems = feasibility_problems(self)
        if problems:
            raise ValueError("infeasible srg parameters: " + "; ".join(problems))

    @property
    def degenerate(self) -> bool:
        """mu = 0: a disjoint union of complete graphs."""
        return self.mu == 0

    def as_tuple(self):
        return (self.v, self.k, self.lam, self.mu)

    def to_json(self) -> dict:
        d = {name: (None if getattr(self, name) is None else int(getattr(self, name)))
             for name in ("v", "k", "lam", "mu", "r", "s", "f1", "f2")}
        d["degenerate"] = self.degenerate
        return d

    def __str__(self):
        return f"srg({self.v},{self.k},{self.lam},{self.mu})"


def feasibility_problems(P) -> list:
    v, k, lam, mu, r, s, f1, f2 = P.v, P.k, P.lam, P.mu, P.r, P.s, P.f1, P.f2
    out = []
    if min(k, lam, mu) < 0:
        out.append("negative k, lambda or mu")
    if r is not None:
        if lam != mu + r + s:
            out.append("lambda != mu + r + s")
        if mu != k + r * s:
            out.append("mu != k + r s")
        if k + f1 * r + f2 * s != 0:
            out.append("k + f1 r + f2 s != 0")
    if k * (k - lam - 1) != mu * (v - k - 1):
        out.append("k(k-lambda-1) != mu(v-k-1)")
    if f1 + f2 != v - 1 or f1 <= 0 or f2 <= 0:
        out.append("multiplicities must be positive and sum to v-1")
    return out


def params_from_spectrum(v, k, r, s) -> SrgParams:
    if r <= s:
        raise ValueError("need r > s")
    if k < 1:
        raise ValueError("need k >= 1")
    mu = k + r * s
    lam = mu + r + s
    if mu < 0 or lam < 0:
        raise ValueError(f"negative parameter: lambda={lam}, mu={mu}")
    num = -k - (v - 1) * s
    if num % (r - s):
        raise ValueError("non-integral multiplicities")
    f1 = num // (r - s)
    return SrgParams(v, k, lam, mu, r, s, f1, v - 1 - f1)


def params_from_lambda_mu(v, k, lam, mu) -> SrgParams:
    d = lam - mu
    disc = d * d + 4 * (k - mu)
    if disc <= 0:
        raise ValueError("restricted eigenvalues are not real and distinct")
    root = isqrt(disc)
    if root * root == disc and (d + root) % 2 == 0:
        return params_from_spectrum(v, k, (d + root) // 2, (d - root) // 2)
    # conference-type: irrational eigenvalues need equal multiplicities
    if 2 * k + (v - 1) * d != 0 or (v - 1) % 2:
        raise ValueError("irrational eigenvalues with unequal multiplicities")
    return SrgParams(v, k, lam, mu, None, None, (v - 1) // 2, (v - 1) // 2)


# ---------------------------------------------------------------------------
# adjacency route
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    bits: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.bits, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if a.diagonal().any():
            raise ValueError("adjacency matrix must have zero diagonal")
        if a.max(initial=0) > 1:
            raise ValueError("adjacency matrix must be 0/1")
        a.setflags(write=False)
        object.__setattr__(self, "bits", a)

    @property
    def v(self) -> int:
        return self.bits.shape[0]

    def complement(self) -> "AdjacencyMatrix":
        c = 1 - self.bits
        np.fill_diagonal(c, 0)
        return AdjacencyMatrix(c)

    def edges(self):
        u, w = np.nonzero(np.triu(self.bits, 1))
        return list(zip(u.tolist(), w.tolist()))


@lru_cache(maxsize=4)
def exponent_table(spec: FieldSpec) -> np.ndarray:
    """e[i] with gamma^e[i] = element i; e[0] = -1 for zero."""
    idx = kernels.power_indices(spec.mult_matrix(spec.primitive), spec.q - 1, spec.p)
    e = np.full(spec.q, -1, dtype=np.int64)
    e[idx] = np.arange(spec.q - 1)
    e.setflags(write=False)
    return e


@lru_cache(maxsize=4)
def difference_table(spec: FieldSpec) -> np.ndarray:
    """q x q table of the index of x - y, built digit by digit."""
    q, p, f = spec.q, spec.p, spec.f
    digits = (np.arange(q)[:, None] // (p ** np.arange(f))[None, :]) % p
    weights = p ** np.arange(f)
    diff = np.zeros((q, q), dtype=np.int32 if q < 2**31 else np.int64)
    for j in range(f):
        diff += ((digits[:, None, j] - digits[None, :, j]) % p) * weights[j]
    diff.setflags(write=False)
    return diff


def element_sets(spec: FieldSpec, D: ConnectionSet) -> np.ndarray:
    """Element indices of the union of the classes in D."""
    e = exponent_table(spec)
    mask = (e >= 0) & np.isin(e % D.N, np.array(D.class_indices, dtype=np.int64))
    return np.nonzero(mask)[0]


def build_cayley(spec: FieldSpec, D: ConnectionSet, budget: int | None = None) -> AdjacencyMatrix:
    budget = Budgets.from_env().brute if budget is None else budget
    if spec.q > budget:
        raise BudgetExceeded(f"q={spec.q} exceeds the brute-force budget {budget}")
    if not D.class_indices:
        raise NotSrgInput("empty connection set gives the edgeless graph")
    if (spec.q - 1) % D.N:
        raise ValueError(f"N={D.N} does not divide q-1")
    if not is_symmetric(spec, D):
        raise ValueError("connection set is not closed under negation")
    members = np.zeros(spec.q, dtype=np.uint8)
    members[element_sets(spec, D)] = 1
    return AdjacencyMatrix(members[difference_table(spec)])


def brute_force_check(A: AdjacencyMatrix, block: int = 8):
    """SrgParams if A^2 = (lam-mu)A + (k-mu)I + mu J for some lam, mu; else None."""
    a = A.bits
    v = A.v
    deg = np.count_nonzero(a, axis=1)
    if deg.max() == 0:
        raise NotSrgInput("edgeless graph")
    if deg.min() == v - 1:
        raise NotSrgInput("complete graph")
    if deg.min() != deg.max():
        return None
    k = int(deg[0])
    # BLAS product is exact: every entry and partial sum is at most v, below
    # 2**24 (float32) or 2**53 (float64)
    af = a.astype(np.float32 if v < (1 << 24) else np.float64)
    col0 = np.rint(af @ af[:, 0]).astype(np.int64)
    nbr = np.flatnonzero(a[:, 0])
    non = np.flatnonzero(a[1:, 0] == 0) + 1
    if len(non) == 0:
        return None
    lam, mu = int(col0[nbr[0]]), int(col0[non[0]])
    # check the identity column block by block; blocks grow so most
    # non-srg graphs fail after a few columns
    c0 = 0
    while c0 < v:
        c1 = min(v, c0 + block)
        sq = np.rint(af @ af[:, c0:c1]).astype(np.int64)
        expect = mu + (lam - mu) * a[:, c0:c1].astype(np.int64)
        expect[np.arange(c0, c1), np.arange(c1 - c0)] = k
        if not np.array_equal(sq, expect):
            return None
        c0, block = c1, block * 2
    try:
        return params_from_lambda_mu(v, k, lam, mu)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# spectral route
# ---------------------------------------------------------------------------

def spectral_check(hist: TraceHistogram, D: ConnectionSet):
    """SrgParams if exactly two distinct restricted eigenvalues occur, else None.

    Irrational pairs (conference graphs) are accepted when their sum and
    product are rational integers, which is automatic for a genuine pair of
    quadratic conjugates.
    """
    if not is_symmetric(hist.spec, D):
        raise ValueError("connection set is not closed under negation")
    spectrum = restricted_eigenvalues(hist, D)
    if spectrum.distinct != 2:
        return None
    q = hist.spec.q
    k = len(D) * hist.class_size
    (x, cx), (y, cy) = spectrum.multiset.items()
    if x.is_rational_integer and y.is_rational_integer:
        if x.to_int() < y.to_int():
            (x, cx), (y, cy) = (y, cy), (x, cx)
        P = params_from_spectrum(q, k, x.to_int(), y.to_int())
        if (P.f1, P.f2) != (cx * hist.class_size, cy * hist.class_size):
            raise ArithmeticError("multiplicities disagree with class counts")
        return P
    total, prod = x + y, x * y
    if not (total.is_rational_integer and prod.is_rational_integer):
        return None
    mu = k + prod.to_int()
    lam = mu + total.to_int()
    P = params_from_lambda_mu(q, k, lam, mu)
    if {P.f1, P.f2} != {cx * hist.class_size, cy * hist.class_size}:
        raise ArithmeticError("multiplicities disagree with class counts")
    return P


def params_from_restricted(v, k, multiset: dict, class_size: int) -> SrgParams:
    """Parameters from an integer eigenvalue multiset {value: class count}."""
    if len(multiset) != 2:
        raise ValueError(f"expected two restricted eigenvalues, got {len(multiset)}")
    (r, cr), (s, cs) = sorted(multiset.items(), key=lambda t: -t[0])
    P = params_from_spectrum(v, k, r, s)
    if (P.f1, P.f2) != (cr * class_size, cs * class_size):
        raise ArithmeticError("multiplicities disagree with class counts")
    return P


# ---------------------------------------------------------------------------
# the two infinite families
# ---------------------------------------------------------------------------

FAMILY_PAIRS = ((7, 37), (3, 13))


def family_values(pair, m: int):
    """Exact (v, k, r, s) for the families attached to (7, 37) and (3, 13)."""
    pair = tuple(pair)
    if m < 1:
        raise ValueError("m must be >= 1")
    if pair == (7, 37):
        e = 9 * 37 ** (m - 1)
        seven = gmpy2.mpz(7)
        v = seven ** e
        r_num = 9 * seven ** ((e - 1) // 2) - 1
        s_num = -4 * seven ** ((e + 1) // 2) - 1
        n = 37
    elif pair == (3, 13):
        e = 3 * 13 ** (m - 1)
        three = gmpy2.mpz(3)
        v = three ** e
        r_num = three ** ((e + 3) // 2) - 1
        s_num = -4 * three ** ((e - 1) // 2) - 1
        n = 13
    else:
        raise ValueError(f"no family for pair {pair}; expected one of {FAMILY_PAIRS}")
    for name, x in (("k", v - 1), ("r", r_num), ("s", s_num)):
        if x % n:
            raise ArithmeticError(f"{name} is not integral for m={m}")
    return v, (v - 1) // n, r_num // n, s_num // n


def family_params(pair, m: int) -> SrgParams:
    return params_from_spectrum(*family_values(pair, m))


# ---------------------------------------------------------------------------
# fixtures and I/O
# ---------------------------------------------------------------------------

def petersen() -> AdjacencyMatrix:
    from itertools import combinations
    verts = list(combinations(range(5), 2))
    a = np.array([[int(not set(x) & set(y)) for y in verts] for x in verts], dtype=np.uint8)
    return AdjacencyMatrix(a)


def write_edges(A: AdjacencyMatrix, path) -> None:
    with open(path, "w") as fh:
        for u, w in A.edges():
            fh.write(f"{u} {w}\n")


def read_edges(path, v: int | None = None) -> AdjacencyMatrix:
    edges = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                u, w = map(int, line.split())
                edges.append((u, w))
    n = v if v is not None else 1 + max((max(e) for e in edges), default=-1)
    a = np.zeros((n, n), dtype=np.uint8)
    for u, w in edges:
        a[u, w] = a[w, u] = 1
    return AdjacencyMatrix(a)
