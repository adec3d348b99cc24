import numpy as np
import pytest

from spectral_ssr import _backend, _fallback
from spectral_ssr.linalg import compact_svd, sym_eig

needs_ext = pytest.mark.skipif(not _backend.HAVE_EXTENSION, reason="extension not built")


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8])
def test_round_robin_covers_each_pair_once(n):
    P, Q = _backend.round_robin(n)
    pairs = [(p, q) for rp, rq in zip(P, Q) for p, q in zip(rp, rq)]
    assert sorted(pairs) == [(p, q) for p in range(n) for q in range(p + 1, n)]
    for rp, rq in zip(P, Q):
        used = list(rp) + list(rq)
        assert len(used) == len(set(used))
    assert not P.flags.writeable


def test_backend_names():
    assert _backend.BACKEND in ("python", "cython")
    assert _backend.get_kernels("python") == (_fallback.jacobi_eigh_sweep,
                                              _fallback.jacobi_svd_sweep)
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


@needs_ext
@pytest.mark.parametrize("n", [4, 17, 40])
def test_eig_backends_identical(n, rng):
    G = rng.standard_normal((n, n))
    M = G + G.T
    a = sym_eig(M, backend="python")
    b = sym_eig(M, backend="cython")
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.vectors, b.vectors)


@needs_ext
@pytest.mark.parametrize("shape", [(5, 9), (12, 4), (6, 6)])
def test_svd_backends_agree(shape, rng):
    A = rng.standard_normal(shape)
    a = compact_svd(A, backend="python")
    b = compact_svd(A, backend="cython")
    assert np.allclose(a.S, b.S, rtol=1e-12)
    assert np.allclose(a.V, b.V, atol=1e-10)
    assert np.allclose(a.U, b.U, atol=1e-10)
