"""Cyclotomic classes, Gauss periods and restricted eigenvalues, exactly.

A Gauss period tau_a = sum_{x in C_a} zeta_p^Tr(x) is determined by the
number of elements of C_a with each trace value, so the whole computation is
carried by an N x p integer histogram.  Values live in Z[zeta_n] (n prime)
as :class:`CycInt`.
"""
from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from sympy import isprime

from . import kernels
from .config import Budgets, BudgetExceeded
from .field import FieldSpec


# ---------------------------------------------------------------------------
# Z[zeta_n]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycInt:
    """sum c_i zeta^i in the basis 1, zeta, ..., zeta^(n-2)."""

    n: int
    coeffs: tuple

    @classmethod
    def from_raw(cls, n: int, raw) -> "CycInt":
        raw = [int(c) for c in raw]
        if len(raw) > n:
            folded = [0] * n
            for i, c in enumerate(raw):
                folded[i % n] += c
            raw = folded
        raw = raw + [0] * (n - len(raw))
        top = raw[n - 1]
        return cls(n, tuple(c - top for c in raw[:n - 1]))

    @classmethod
    def integer(cls, n: int, k: int) -> "CycInt":
        return cls(n, (int(k),) + (0,) * (n - 2))

    @property
    def raw(self) -> list:
        return list(self.coeffs) + [0]

    @property
    def is_rational_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational_integer:
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, CycInt):
            if other.n != self.n:
                raise ValueError("cyclotomic integers of different orders")
            return other
        return CycInt.integer(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CycInt(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        n = self.n
        out = [0] * n
        b = [(j, c) for j, c in enumerate(other.coeffs) if c]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, c in b:
                    out[(i + j) % n] += a * c
        return CycInt.from_raw(n, out)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycInt":
        """Image under zeta -> zeta^k."""
        n = self.n
        if k % n == 0:
            raise ValueError("k must be a unit mod n")
        out = [0] * n
        for i, c in enumerate(self.raw):
            out[i * k % n] += c
        return CycInt.from_raw(n, out)

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi * np.arange(self.n - 1) / self.n)
        return complex(np.dot(np.array(self.coeffs, dtype=np.float64), z))

    def __repr__(self):
        if self.is_rational_integer:
            return f"CycInt({self.n}: {self.coeffs[0]})"
        terms = [f"{c}z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycInt({self.n}: {' + '.join(terms)})"


def cycint_canonicalize(n: int, raw) -> CycInt:
    if not isprime(n):
        raise ValueError(f"root-of-unity order {n} must be prime")
    if len(raw) != n:
        raise ValueError(f"expected {n} raw coefficients, got {len(raw)}")
    return CycInt.from_raw(n, raw)


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TraceHistogram:
    spec: FieldSpec
    N: int
    counts: np.ndarray = field(repr=False)   # N x p, counts[a, c] = #{x in C_a : Tr x = c}

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)
        if c.shape != (self.N, self.spec.p):
            raise ValueError(f"histogram shape {c.shape} != ({self.N}, {self.spec.p})")
        size = (self.spec.q - 1) // self.N
        if not (c.sum(axis=1) == size).all():
            raise ValueError("histogram rows must each sum to (q-1)/N")

    def __eq__(self, other):
        return (isinstance(other, TraceHistogram) and self.spec == other.spec
                and self.N == other.N and np.array_equal(self.counts, other.counts))

    @property
    def class_size(self) -> int:
        return (self.spec.q - 1) // self.N

    def to_json(self) -> dict:
        d = self.spec.to_json()
        d["N"] = self.N
        d["counts"] = self.counts.tolist()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "TraceHistogram":
        return cls(FieldSpec.from_json(d), int(d["N"]), np.array(d["counts"], dtype=np.int64))


def _cache_key(spec: FieldSpec, N: int) -> str:
    blob = json.dumps({**spec.to_json(), "N": N}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def cache_path(cache_dir, spec: FieldSpec, N: int) -> Path:
    return Path(cache_dir) / f"hist-{spec.p}-{spec.f}-{N}-{_cache_key(spec, N)}.json"


def save_histogram(hist: TraceHistogram, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(hist.to_json(), sort_keys=True, separators=(",", ":")))
    os.replace(tmp, path)


def load_histogram(path) -> TraceHistogram:
    return TraceHistogram.from_json(json.loads(Path(path).read_text()))


def _ranges(total, chunks):
    chunks = max(1, min(chunks, total))
    step = -(-total // chunks)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def trace_histogram(spec: FieldSpec, N: int, *, workers: int = 1, chunks: int | None = None,
                    cache_dir=None, budget: int | None = None, use_numba=None) -> TraceHistogram:
    """Count traces per cyclotomic class with one pass over gamma^0 .. gamma^(q-2).

    The pass is split into exponent ranges [s, e), each seeded with gamma^s;
    the partial histograms are summed, so the result does not depend on
    ``chunks`` or ``workers``.
    """
    q = spec.q
    if N < 1 or (q - 1) % N:
        raise ValueError(f"N={N} does not divide q-1={q - 1}")
    budget = Budgets.from_env().enum if budget is None else budget
    if q > budget:
        raise BudgetExceeded(f"q={q} exceeds the enumeration budget {budget}")
    path = cache_path(cache_dir, spec, N) if cache_dir else None
    if path is not None and path.exists():
        hist = load_histogram(path)
        if hist.spec == spec and hist.N == N:
            return hist

    gamma = spec.primitive
    mat = spec.mult_matrix(gamma)
    tvec = spec.trace_vector()
    qform = spec.trace_form()
    parts = _ranges(q - 1, chunks if chunks is not None else workers)

    def run(rng):
        s, e = rng
        v0 = np.array((gamma ** s).coeffs, dtype=np.int64)
        return kernels.trace_histogram_range(mat, tvec, qform, v0, s, e, N, spec.p,
                                             use_numba=use_numba)

    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, parts))
    else:
        partials = [run(r) for r in parts]
    counts = np.sum(partials, axis=0)
    hist = TraceHistogram(spec, N, counts)
    if path is not None:
        save_histogram(hist, path)
    return hist


def enumerate_histogram(spec: FieldSpec, N: int) -> TraceHistogram:
    """Reference path: element-by-element field arithmetic, no kernels."""
    from .field import trace
    counts = np.zeros((N, spec.p), dtype=np.int64)
    g = spec.primitive
    x = spec.one
    for i in range(spec.q - 1):
        counts[i % N, trace(spec, x)] += 1
        x = x * g
    return TraceHistogram(spec, N, counts)


def gauss_periods(hist: TraceHistogram) -> list:
    p = hist.spec.p
    return [CycInt.from_raw(p, row) for row in hist.counts.tolist()]


# ---------------------------------------------------------------------------
# connection sets and restricted eigenvalues
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionSet:
    N: int
    class_indices: tuple
    p1: int | None = None
    m: int | None = None

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.class_indices)))
        if any(not 0 <= i < self.N for i in idx):
            raise ValueError("class indices must lie in [0, N-1]")
        object.__setattr__(self, "class_indices", idx)

    @classmethod
    def index4(cls, p1: int, m: int) -> "ConnectionSet":
        """Union of the first p1^(m-1) classes of order N = p1^m."""
        return cls(p1 ** m, tuple(range(p1 ** (m - 1))), p1, m)

    @classmethod
    def initial(cls, N: int, k: int) -> "ConnectionSet":
        return cls(N, tuple(range(k)))

    def __len__(self):
        return len(self.class_indices)


def negation_shift(spec: FieldSpec, N: int) -> int:
    """h with -C_i = C_{i+h}: -1 = gamma^((q-1)/2) for odd q, and -1 = 1 in characteristic 2."""
    if spec.p == 2:
        return 0
    minus_one = spec.primitive ** ((spec.q - 1) // 2)
    if minus_one != -spec.one:
        raise ArithmeticError("gamma^((q-1)/2) != -1; gamma is not primitive")
    return ((spec.q - 1) // 2) % N


def is_symmetric(spec: FieldSpec, D: ConnectionSet) -> bool:
    h = negation_shift(spec, D.N)
    s = set(D.class_indices)
    return {(i + h) % D.N for i in s} == s


@dataclass(frozen=True, eq=False)
class RestrictedSpectrum:
    """psi(gamma^a D) for a = 0..N-1; each value has multiplicity (q-1)/N in the graph."""

    values: tuple
    class_size: int

    @cached_property
    def multiset(self) -> Counter:
        return Counter(self.values)

    @property
    def distinct(self) -> int:
        return len(self.multiset)

    @property
    def all_integral(self) -> bool:
        return all(v.is_rational_integer for v in self.multiset)

    def integer_multiset(self):
        """{value: number of classes} when every value is a rational integer, else None."""
        if not self.all_integral:
            return None
        return dict(sorted(((v.to_int(), c) for v, c in self.multiset.items()),
                           key=lambda t: -t[0]))


def _eigen_raw(counts: np.ndarray, idx) -> np.ndarray:
    E = np.zeros_like(counts)
    for i in idx:
        E += np.roll(counts, -i, axis=0)
    return E


def restricted_eigenvalues(hist: TraceHistogram, D: ConnectionSet) -> RestrictedSpectrum:
    if D.N != hist.N:
        raise ValueError(f"connection set has N={D.N}, histogram has N={hist.N}")
    E = _eigen_raw(hist.counts, D.class_indices)
    p = hist.spec.p
    values = tuple(CycInt.from_raw(p, row) for row in E.tolist())
    return RestrictedSpectrum(values, hist.class_size)


def initial_segment_spectra(hist: TraceHistogram):
    """Yield (k, canonical N x (p-1) eigenvalue matrix) for D = C_0 u ... u C_{k-1}, k = 1..N-1.

    Row a of the matrix is the canonical CycInt coefficient vector of psi(gamma^a D).
    """
    counts = hist.counts
    E = np.zeros_like(counts)
    for k in range(1, hist.N):
        E = E + np.roll(counts, -(k - 1), axis=0)
        yield k, E[:, :-1] - E[:, -1:]
