"""Finite fields F_{p^f} in a power basis.

Elements are coefficient tuples, lowest degree first, over Z_p.  An element
also has an integer *index* sum(c_i * p**i), which is the order used when
searching for the least primitive element and when labelling vertices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from sympy import factorint, isprime

from .config import Budgets, BudgetExceeded


# ---------------------------------------------------------------------------
# polynomials over Z_p: lists of ints, lowest degree first, no trailing zeros
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def poly_divmod(a, b, p):
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return _trim(q), a


def poly_mod(a, m, p):
    return poly_divmod(a, m, p)[1]


def poly_gcd(a, b, p):
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(a, e, m, p):
    result = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = poly_mod(poly_mul(base, base, p), m, p)
    return result


def is_irreducible(modulus, p):
    """Rabin's test for a monic polynomial (coefficients lowest first)."""
    m = _trim([c % p for c in modulus])
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in factorint(n):
        h = poly_powmod(x, p ** (n // r), m, p)
        h = h + [0] * (2 - len(h)) if len(h) < 2 else list(h)
        h[1] = (h[1] - 1) % p
        if len(poly_gcd(_trim(h), m, p)) != 1:
            return False
    h = poly_powmod(x, p ** n, m, p)
    return _trim(list(h)) == [0, 1]


def _has_root(poly, p):
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def least_irreducible(p, f):
    """Lexicographically least monic irreducible of degree f (c_0 compared first)."""
    if f == 1:
        return (0, 1)
    # c_0 = 0 means x divides the candidate
    for low in itertools.product(range(1, p), *[range(p)] * (f - 1)):
        cand = list(low) + [1]
        if f <= 3 or not _has_root(cand, p):
            if is_irreducible(cand, p):
                return tuple(cand)
    raise ArithmeticError(f"no irreducible polynomial of degree {f} over Z_{p}")


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    f: int
    modulus: tuple   # f+1 coefficients, monic, lowest degree first
    gamma: tuple = ()  # f coefficients of the fixed primitive element

    @property
    def q(self) -> int:
        return self.p ** self.f

    # -- element construction ------------------------------------------------
    def element(self, coeffs) -> "FieldElement":
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.f:
            c = poly_mod(c, self.modulus, self.p)
        c = c + [0] * (self.f - len(c))
        return FieldElement(self, tuple(c))

    def from_index(self, idx: int) -> "FieldElement":
        if not 0 <= idx < self.q:
            raise ValueError(f"index {idx} outside F_{self.q}")
        c = []
        for _ in range(self.f):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return FieldElement(self, tuple(c))

    def scalar(self, c: int) -> "FieldElement":
        return self.element([c])

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    @property
    def x(self):
        return self.element([0, 1]) if self.f > 1 else self.scalar(0)

    @property
    def primitive(self) -> "FieldElement":
        if not self.gamma:
            raise ValueError("FieldSpec has no primitive element")
        return FieldElement(self, self.gamma)

    # -- linear-algebra views used by the kernels ----------------------------
    def mult_matrix(self, e: "FieldElement") -> np.ndarray:
        """f x f matrix over Z_p of y -> e*y acting on coefficient columns."""
        cols = []
        for j in range(self.f):
            basis = [0] * j + [1]
            cols.append((e * self.element(basis)).coeffs)
        return np.array(cols, dtype=np.int64).T.copy()

    def trace_vector(self) -> np.ndarray:
        """t with Tr(y) = t . coeffs(y) mod p."""
        return np.array([trace(self, self.element([0] * j + [1]))
                         for j in range(self.f)], dtype=np.int64)

    def trace_form(self) -> np.ndarray:
        """Q with Tr(u*v) = coeffs(u) Q coeffs(v) mod p."""
        tx = [trace(self, self.element([0] * k + [1])) for k in range(2 * self.f - 1)]
        return np.array([[tx[a + b] for b in range(self.f)] for a in range(self.f)],
                        dtype=np.int64)

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus),
                "gamma": list(self.gamma)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        spec = cls(int(d["p"]), int(d["f"]), tuple(int(c) for c in d["modulus"]),
                   tuple(int(c) for c in d["gamma"]))
        if len(spec.modulus) != spec.f + 1 or spec.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if len(spec.gamma) != spec.f:
            raise ValueError("gamma must have f coefficients")
        return spec


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec = field(repr=False)
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return self.spec.scalar(other)
        if other.spec.p != self.spec.p or other.spec.modulus != self.spec.modulus:
            raise ValueError("operands belong to different fields")
        return other

    @property
    def index(self) -> int:
        return sum(c * self.spec.p ** i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        other = self._check(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return self.spec.element(poly_mul(list(self.coeffs), list(other.coeffs), self.spec.p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        prod = poly_powmod(list(self.coeffs), int(k), list(self.spec.modulus), self.spec.p)
        return self.spec.element(prod)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def order(self, factors=None) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        n = self.spec.q - 1
        factors = factors if factors is not None else factorint(n)
        for ell, e in factors.items():
            for _ in range(e):
                if (self ** (n // ell)).coeffs == self.spec.one.coeffs:
                    n //= ell
                else:
                    break
        return n


def trace(spec: FieldSpec, x: FieldElement) -> int:
    """Absolute trace Tr_{q/p}(x) = sum x^(p^i), returned as an int in [0, p)."""
    total = spec.zero
    y = x
    for _ in range(spec.f):
        total = total + y
        y = y ** spec.p
    if any(total.coeffs[1:]):
        raise ArithmeticError("trace left the prime field (modulus not irreducible?)")
    return total.coeffs[0]


def find_primitive(spec: FieldSpec) -> FieldElement:
    """Least element, by index, of multiplicative order q-1."""
    n = spec.q - 1
    if n == 1:
        return spec.one
    factors = factorint(n)
    one = spec.one.coeffs
    for idx in range(1, spec.q):
        g = spec.from_index(idx)
        if all((g ** (n // ell)).coeffs != one for ell in factors):
            return g
    raise ArithmeticError("no primitive element found (modulus not irreducible?)")


def build_field(p: int, f: int, budget: int | None = None) -> FieldSpec:
    """F_{p^f} with the least irreducible modulus and the least primitive element."""
    p, f = int(p), int(f)
    if not isprime(p):
        raise ValueError(f"p={p} is not prime")
    if f < 1:
        raise ValueError("extension degree f must be >= 1")
    budget = Budgets.from_env().enum if budget is None else budget
    if p ** f > budget:
        raise BudgetExceeded(f"q = {p}^{f} exceeds the enumeration budget {budget}")
    spec = FieldSpec(p, f, least_irreducible(p, f))
    gamma = find_primitive(spec)
    return FieldSpec(p, f, spec.modulus, gamma.coeffs)


def with_gamma(spec: FieldSpec, gamma: FieldElement) -> FieldSpec:
    """Same field with a different fixed primitive element."""
    if gamma.order() != spec.q - 1:
        raise ValueError("element is not primitive")
    return FieldSpec(spec.p, spec.f, spec.modulus, gamma.coeffs)


def prime_power(q: int) -> tuple[int, int]:
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, f), = fac.items()
    return p, f
