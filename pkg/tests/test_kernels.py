import itertools

import numpy as np
import pytest

from cyclosrg import kernels
from cyclosrg._accel import HAVE_NUMBA, backend
from cyclosrg.field import build_field

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")


def brute_three_squares(R):
    r = int(R ** 0.5) + 1
    return sorted(t for t in itertools.product(range(-r, r + 1), repeat=3)
                  if sum(x * x for x in t) == R)


@pytest.mark.parametrize("R", [0, 1, 2, 3, 7, 9, 25, 50, 99, 125])
def test_three_squares_exhaustive(R):
    got = kernels.three_squares(R, use_numba=False).tolist()
    assert sorted(map(tuple, got)) == brute_three_squares(R)
    assert len(got) == len(set(map(tuple, got)))


def test_three_squares_negative_and_overflow():
    assert kernels.three_squares(-1, use_numba=False).shape == (0, 3)
    with pytest.raises(OverflowError):
        kernels.three_squares(1 << 63)


@needs_numba
@pytest.mark.parametrize("R", [0, 5, 7, 28, 12345, 99991])
def test_three_squares_backends_agree(R):
    a = kernels.three_squares(R, use_numba=False)
    b = kernels.three_squares(R, use_numba=True)
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("p,f", [(2, 12), (3, 8), (13, 3)])
def test_power_indices_backends_agree(p, f):
    F = build_field(p, f)
    mat = F.mult_matrix(F.primitive)
    a = kernels.power_indices(mat, F.q - 1, p, use_numba=False)
    b = kernels.power_indices(mat, F.q - 1, p, use_numba=True)
    assert np.array_equal(a, b)


def test_backend_name():
    assert backend() in ("numba", "numpy")


def test_numba_request_without_numba(monkeypatch):
    monkeypatch.setattr(kernels, "HAVE_NUMBA", False)
    with pytest.raises(RuntimeError):
        kernels.three_squares(5, use_numba=True)
