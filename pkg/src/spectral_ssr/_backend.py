"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``SSR_BACKEND=python`` forces the fallback.
"""
import os
from functools import lru_cache

import numpy as np

from . import _fallback

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

HAVE_EXTENSION = _kernels is not None
BACKEND = "python"
jacobi_eigh_sweep = _fallback.jacobi_eigh_sweep
jacobi_svd_sweep = _fallback.jacobi_svd_sweep

if HAVE_EXTENSION and os.environ.get("SSR_BACKEND", "").lower() not in ("python", "py", "fallback"):
    BACKEND = "cython"
    jacobi_eigh_sweep = _kernels.jacobi_eigh_sweep
    jacobi_svd_sweep = _kernels.jacobi_svd_sweep


def get_kernels(backend=None):
    """Return ``(eigh_sweep, svd_sweep)`` for ``backend`` (default: active)."""
    if backend is None:
        backend = BACKEND
    if backend == "python":
        return _fallback.jacobi_eigh_sweep, _fallback.jacobi_svd_sweep
    if backend == "cython":
        if not HAVE_EXTENSION:
            raise ValueError("the compiled extension is not built")
        return _kernels.jacobi_eigh_sweep, _kernels.jacobi_svd_sweep
    raise ValueError(f"unknown backend {backend!r}")


@lru_cache(maxsize=64)
def round_robin(n):
    """Round-robin pairing of ``0..n-1`` into rounds of disjoint pairs.

    Returns two ``(rounds, pairs)`` intp arrays with ``P < Q`` elementwise.
    Every unordered pair appears exactly once per sweep.
    """
    m = n + (n % 2)
    players = list(range(m))
    P, Q = [], []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= n or b >= n:
                continue
            ps.append(min(a, b))
            qs.append(max(a, b))
        P.append(ps)
        Q.append(qs)
        players = [players[0], players[-1]] + players[1:-1]
    P = np.array(P, dtype=np.intp).reshape(m - 1, -1)
    Q = np.array(Q, dtype=np.intp).reshape(m - 1, -1)
    P.flags.writeable = False
    Q.flags.writeable = False
    return P, Q
