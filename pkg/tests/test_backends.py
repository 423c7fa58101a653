"""The numba kernels and the pure-numpy fallbacks must agree bit-exactly."""

import itertools

import numpy as np
import pytest

from sylowkit.backends import numpy_impl

try:
    from sylowkit.backends import numba_impl
except ImportError:  # pragma: no cover
    numba_impl = None

pytestmark = pytest.mark.skipif(numba_impl is None, reason="numba unavailable")

from sylowkit.ff import ff_make


def _grid_words(q, width, count):
    ar = np.arange(count, dtype=np.int64) * 2654435761 % (q**width)
    w = (ar[:, None] // (q ** np.arange(width, dtype=np.int64))[None, :]) % q
    return w.astype(np.int8)


@pytest.mark.parametrize("p,r,n", [(3, 1, 2), (2, 2, 3), (3, 2, 2), (2, 1, 4)])
def test_matmul_table_agree(p, r, n):
    f = ff_make(p, r)
    A = _grid_words(f.q, n * n, 257).reshape(-1, n, n)
    B = _grid_words(f.q, n * n, 257)[::-1].reshape(-1, n, n).copy()
    got_nb = numba_impl.matmul_table(A, B, f.mul_t, f.add_t)
    got_np = numpy_impl.matmul_table(A, B, f.mul_t, f.add_t)
    assert np.array_equal(got_nb, got_np)


def test_matmul_table_rectangular_agree():
    f = ff_make(3, 1)
    A = _grid_words(3, 3, 100).reshape(-1, 1, 3)
    B = _grid_words(3, 9, 100).reshape(-1, 3, 3)
    assert np.array_equal(
        numba_impl.matmul_table(A, B, f.mul_t, f.add_t),
        numpy_impl.matmul_table(A, B, f.mul_t, f.add_t),
    )


def test_entrywise_table_agree():
    f = ff_make(5, 1)
    A = _grid_words(5, 6, 321)
    B = _grid_words(5, 6, 321)[::-1].copy()
    assert np.array_equal(
        numba_impl.entrywise_table(A, B, f.add_t),
        numpy_impl.entrywise_table(A, B, f.add_t),
    )


def test_compose_perms_agree():
    perms = np.array(list(itertools.permutations(range(5))), dtype=np.int8)
    A = perms[::3][:40]
    B = perms[1::3][:40]
    assert np.array_equal(
        numba_impl.compose_perms(A, B), numpy_impl.compose_perms(A, B)
    )


def test_encode_base_agree():
    W = _grid_words(7, 5, 200)
    weights = 7 ** np.arange(5, dtype=np.int64)
    assert np.array_equal(
        numba_impl.encode_base(W, weights), numpy_impl.encode_base(W, weights)
    )


@pytest.mark.parametrize("p,r,n", [(3, 1, 2), (2, 2, 3), (5, 1, 3)])
def test_det_table_agree_and_correct(p, r, n):
    f = ff_make(p, r)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    signs = np.array(
        [1 - 2 * (sum(1 for i in range(n) for j in range(i + 1, n) if pp[i] > pp[j]) % 2)
         for pp in perms],
        dtype=np.int8,
    )
    A = _grid_words(f.q, n * n, 300).reshape(-1, n, n)
    d_nb = numba_impl.det_table(A, perms, signs, f.mul_t, f.add_t, f.neg_t)
    d_np = numpy_impl.det_table(A, perms, signs, f.mul_t, f.add_t, f.neg_t)
    assert np.array_equal(d_nb, d_np)
    if r == 1:  # prime field: cross-check against integer arithmetic
        ints = np.round(np.linalg.det(A.astype(np.float64))).astype(np.int64) % p
        assert np.array_equal(d_np.astype(np.int64), ints)


def test_backend_selection_flag(monkeypatch):
    import importlib
    import sylowkit.backends as bk

    monkeypatch.setenv("SYLOWKIT_BACKEND", "numpy")
    mod = importlib.reload(bk)
    assert mod.BACKEND == "numpy"
    monkeypatch.delenv("SYLOWKIT_BACKEND")
    mod = importlib.reload(bk)
    assert mod.BACKEND in ("numba", "numpy")
