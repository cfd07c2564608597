"""Small exact number theory: orders, primitive roots, squares."""
from __future__ import annotations

from math import gcd, isqrt

from sympy import factorint, isprime, totient


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def mult_order(a: int, n: int) -> int:
    """Multiplicative order of a mod n by descent through the prime factors of phi(n)."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1")
    if n == 1:
        return 1
    order = int(totient(n))
    for ell, e in factorint(order).items():
        for _ in range(e):
            if pow(a, order // ell, n) == 1:
                order //= ell
            else:
                break
    return order


def primitive_root_lifted(p1: int, m: int = 1) -> int:
    """Least g primitive mod p1 with g^(p1-1) != 1 mod p1^2, hence primitive mod every p1^m."""
    if p1 == 2 or not isprime(p1):
        raise ValueError(f"{p1} is not an odd prime")
    for g in range(2, p1 * p1):
        if g % p1 == 0:
            continue
        if mult_order(g, p1) == p1 - 1 and pow(g, p1 - 1, p1 * p1) != 1:
            return g
    raise ArithmeticError("unreachable: some residue lifts")


def index4_conditions(p: int, p1: int) -> dict:
    """Each index-4 condition on (p, p1) and whether it holds."""
    ft = (p1 - 1) // 4
    out = {
        "p1 = 5 mod 8": p1 % 8 == 5,
        "p1 > 5": p1 > 5,
        "gcd(p(p-1), p1) = 1": gcd(p * (p - 1), p1) == 1,
    }
    if out["gcd(p(p-1), p1) = 1"]:
        o = mult_order(p, p1)
        out["ord_p1(p) = (p1-1)/4"] = o == ft
        # -1 in <p> iff p^(o/2) = -1; impossible for odd o
        out["-1 not in <p>"] = not (o % 2 == 0 and pow(p, o // 2, p1) == p1 - 1)
    else:
        out["ord_p1(p) = (p1-1)/4"] = False
        out["-1 not in <p>"] = False
    return out
