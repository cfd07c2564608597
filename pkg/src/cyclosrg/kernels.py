"""Hot inner loops.

Each kernel has a numba version and a blocked pure-numpy version with the
same signature and bit-identical output.  ``CYCLOSRG_KERNELS=numpy`` selects
the numpy versions globally; both are importable directly for benchmarking.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

BLOCK = 1 << 16

# below these sizes the auto choice is numpy: the numba compile or cache
# load would cost more than it saves
AUTO_NUMBA_MIN = {"histogram": None, "powers": 1 << 20, "three_squares": 1 << 22}


def _pick(use_numba, kernel, size):
    if use_numba is not None:
        if use_numba and not HAVE_NUMBA:
            raise RuntimeError("numba requested but unavailable or disabled")
        return bool(use_numba)
    threshold = AUTO_NUMBA_MIN[kernel]
    return HAVE_NUMBA and threshold is not None and size >= threshold


# ---------------------------------------------------------------------------
# trace histogram over a range of exponents
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _histogram_numba(mat, tvec, v0, start, stop, n_classes, p):
    f = v0.shape[0]
    counts = np.zeros((n_classes, p), np.int64)
    v = v0.copy()
    w = np.empty(f, np.int64)
    a = start % n_classes
    for _ in range(start, stop):
        t = 0
        for j in range(f):
            t += tvec[j] * v[j]
        counts[a, t % p] += 1
        for r in range(f):
            s = 0
            for c in range(f):
                s += mat[r, c] * v[c]
            w[r] = s % p
        v, w = w, v
        a += 1
        if a == n_classes:
            a = 0
    return counts


def _power_block(mat, f, p, length):
    """Rows are coefficient vectors of gamma^0 .. gamma^(length-1)."""
    P = np.zeros((1, f), np.int64)
    P[0, 0] = 1
    step = mat.copy()            # multiplication by gamma^(rows so far)
    while P.shape[0] < length:
        P = np.vstack([P, (P @ step.T) % p])
        step = (step @ step) % p
    return P[:length]


def _histogram_numpy(mat, tvec, v0, start, stop, n_classes, p, qform=None):
    f = v0.shape[0]
    counts = np.zeros(n_classes * p, np.int64)
    total = stop - start
    if total <= 0:
        return counts.reshape(n_classes, p)
    L = min(BLOCK, total)
    P = _power_block(mat, f, p, L)
    # multiplication by gamma^L
    jump = np.eye(f, dtype=np.int64)
    base, e = mat.copy(), L
    while e:
        if e & 1:
            jump = (jump @ base) % p
        base = (base @ base) % p
        e >>= 1
    v = v0.astype(np.int64).copy()
    offsets = np.arange(L, dtype=np.int64)
    pos = start
    while pos < stop:
        n = min(L, stop - pos)
        w = (qform @ v) % p
        tr = (P[:n] @ w) % p
        cls = (pos + offsets[:n]) % n_classes
        counts += np.bincount(cls * p + tr, minlength=n_classes * p)
        v = (jump @ v) % p
        pos += n
    return counts.reshape(n_classes, p)


def trace_histogram_range(mat, tvec, qform, v0, start, stop, n_classes, p, use_numba=None):
    """counts[a, c] over exponents i in [start, stop): a = i mod N, c = Tr(v0 * gamma^(i-start))."""
    use_numba = _pick(use_numba, "histogram", stop - start)
    mat = np.ascontiguousarray(mat, np.int64)
    v0 = np.ascontiguousarray(v0, np.int64)
    if use_numba:
        return _histogram_numba(mat, np.ascontiguousarray(tvec, np.int64), v0,
                                int(start), int(stop), int(n_classes), int(p))
    return _histogram_numpy(mat, tvec, v0, int(start), int(stop), int(n_classes), int(p),
                            np.ascontiguousarray(qform, np.int64))


# ---------------------------------------------------------------------------
# element index of every power of gamma (brute force graph construction)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _power_indices_numba(mat, count, p):
    f = mat.shape[0]
    out = np.empty(count, np.int64)
    v = np.zeros(f, np.int64)
    v[0] = 1
    w = np.empty(f, np.int64)
    for i in range(count):
        idx = 0
        base = 1
        for j in range(f):
            idx += v[j] * base
            base *= p
        out[i] = idx
        for r in range(f):
            s = 0
            for c in range(f):
                s += mat[r, c] * v[c]
            w[r] = s % p
        v, w = w, v
    return out


def power_indices(mat, count, p, use_numba=None):
    use_numba = _pick(use_numba, "powers", count)
    mat = np.ascontiguousarray(mat, np.int64)
    if use_numba:
        return _power_indices_numba(mat, int(count), int(p))
    P = _power_block(mat, mat.shape[0], p, count)
    weights = p ** np.arange(mat.shape[0], dtype=np.int64)
    return P @ weights


# ---------------------------------------------------------------------------
# all (x, y, z) in Z^3 with x^2 + y^2 + z^2 = R
# ---------------------------------------------------------------------------

@njit(cache=True)
def _isqrt_nb(n):
    r = int(math.sqrt(n))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _three_squares_numba(R):
    lim = _isqrt_nb(R) if R >= 0 else -1
    cap = 64
    out = np.empty((cap, 3), np.int64)
    n = 0
    for x in range(-lim, lim + 1):
        rx = R - x * x
        ly = _isqrt_nb(rx)
        for y in range(-ly, ly + 1):
            rz = rx - y * y
            z = _isqrt_nb(rz)
            if z * z != rz:
                continue
            if n + 2 > cap:
                cap *= 2
                grown = np.empty((cap, 3), np.int64)
                grown[:n] = out[:n]
                out = grown
            out[n, 0] = x
            out[n, 1] = y
            out[n, 2] = z
            n += 1
            if z != 0:
                out[n, 0] = x
                out[n, 1] = y
                out[n, 2] = -z
                n += 1
    return out[:n]


def _isqrt_vec(a):
    r = np.floor(np.sqrt(a.astype(np.float64))).astype(np.int64)
    r -= (r * r > a)
    r += ((r + 1) * (r + 1) <= a)
    return r


def _three_squares_numpy(R):
    if R < 0:
        return np.empty((0, 3), np.int64)
    lim = math.isqrt(R)
    rows = []
    for x in range(-lim, lim + 1):
        rx = R - x * x
        ly = math.isqrt(rx)
        y = np.arange(-ly, ly + 1, dtype=np.int64)
        rz = rx - y * y
        z = _isqrt_vec(rz)
        hit = z * z == rz
        for yy, zz in zip(y[hit], z[hit]):
            rows.append((x, yy, zz))
            if zz:
                rows.append((x, yy, -zz))
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def three_squares(R, use_numba=None):
    """Every integer triple with squares summing to R, ordered by (x, y, z-sign)."""
    use_numba = _pick(use_numba, "three_squares", R)
    if R > (1 << 62):
        raise OverflowError("three-squares search limited to R < 2**62")
    if use_numba:
        return _three_squares_numba(int(R))
    return _three_squares_numpy(int(R))


def three_squares_work(R) -> int:
    """Lattice points visited by the exhaustive search (about pi * R)."""
    return 0 if R < 0 else int(math.pi * R) + 2 * math.isqrt(R) + 1
