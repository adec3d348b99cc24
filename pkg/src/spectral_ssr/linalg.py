"""Dense linear-algebra kernels: Jacobi eigensolver, compact SVD, Procrustes.

Both decompositions run cyclic Jacobi sweeps in round-robin order; the sweep
itself lives in the compiled extension (or its numpy fallback).
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NumericError, ValidationError

_EPS = np.finfo(float).eps
MAX_SWEEPS = 60


@dataclass
class EigenBasis:
    """Selected eigenpairs of a symmetric matrix.

    Attributes
    ----------
    vectors : ndarray, shape (r, n)
        Orthonormal eigenvectors as rows.
    values : ndarray, shape (r,)
        Eigenvalues, ascending.
    source_dim : int
        Dimension ``n`` of the decomposed matrix.
    """

    vectors: np.ndarray
    values: np.ndarray
    source_dim: int
    sweeps: int = 0


@dataclass
class SvdFactors:
    """Compact SVD ``A = U @ diag(S) @ V`` with right vectors as rows of V."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def truncate(self, r):
        return SvdFactors(self.U[:, :r], self.S[:r], self.V[:r])

    def reconstruct(self):
        return (self.U * self.S) @ self.V


def as_matrix(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValidationError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} has non-finite entries")
    return A


def fix_signs(rows):
    """Flip each row so its largest-magnitude entry is positive (in place)."""
    if rows.size == 0:
        return np.ones(rows.shape[0])
    idx = np.argmax(np.abs(rows), axis=1)
    signs = np.where(rows[np.arange(rows.shape[0]), idx] < 0, -1.0, 1.0)
    rows *= signs[:, None]
    return signs


def _jacobi_eigh(A, backend=None):
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if norm == 0.0 or n == 1:
        return np.diag(A).copy(), V, 0
    eigh_sweep, _ = _backend.get_kernels(backend)
    P, Q = _backend.round_robin(n)
    skip_tol = _EPS * norm / n
    for sweep in range(1, MAX_SWEEPS + 1):
        if eigh_sweep(A, V, P, Q, skip_tol) == 0:
            return np.diag(A).copy(), V, sweep
    off = np.linalg.norm(A - np.diag(np.diag(A)))
    raise NumericError(
        f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps "
        f"(off-diagonal residual {off:.3e}, relative {off / norm:.3e})"
    )


def sym_eig(M, r=None, which="smallest", backend=None):
    """Eigenpairs of a symmetric matrix by cyclic Jacobi rotation.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Symmetric matrix (relative asymmetry at most 1e-10).
    r : int, optional
        Number of eigenpairs to return; all ``n`` by default.
    which : {"smallest", "largest"}
        Which end of the spectrum to return. Values are ascending either way.
    backend : {"cython", "python"}, optional
        Override the kernel backend selected at import.

    Returns
    -------
    EigenBasis
        Each eigenvector has its largest-magnitude entry made positive.
    """
    M = as_matrix(M, "M")
    n = M.shape[0]
    if M.shape[1] != n:
        raise ValidationError(f"M must be square, got shape {M.shape}")
    if r is None:
        r = n
    if not 1 <= r <= n:
        raise ValidationError(f"r must satisfy 1 <= r <= {n}, got {r}")
    if which not in ("smallest", "largest"):
        raise ValidationError(f"which must be 'smallest' or 'largest', got {which!r}")
    scale = np.linalg.norm(M)
    if np.linalg.norm(M - M.T) > 1e-10 * scale:
        raise ValidationError("M is not symmetric")

    A = np.ascontiguousarray(0.5 * (M + M.T))
    values, V, sweeps = _jacobi_eigh(A, backend)
    order = np.argsort(values, kind="stable")
    order = order[:r] if which == "smallest" else order[n - r:]
    vectors = np.ascontiguousarray(V[:, order].T)
    fix_signs(vectors)
    return EigenBasis(vectors=vectors, values=values[order], source_dim=n, sweeps=sweeps)


def _complete_columns(U, keep):
    """Replace columns of U not in ``keep`` with an orthonormal completion."""
    m, k = U.shape
    basis = [U[:, j] for j in range(k) if keep[j]]
    for j in range(k):
        if keep[j]:
            continue
        B = np.array(basis).T if basis else np.zeros((m, 0))
        # residual of each unit vector against the current basis; take the largest
        R = np.eye(m) - B @ B.T
        R -= B @ (B.T @ R)
        best = int(np.argmax(np.linalg.norm(R, axis=0)))
        v = R[:, best] / np.linalg.norm(R[:, best])
        U[:, j] = v
        basis.append(v)
    return U


def compact_svd(A, backend=None):
    """Compact SVD by one-sided (Hestenes) Jacobi.

    Returns ``SvdFactors`` with ``m = min(p, n)`` singular values in
    descending order. Left vectors belonging to (numerically) zero singular
    values are completed to an orthonormal set, so ``U.T @ U = I`` always.
    """
    A = as_matrix(A, "A")
    p, n = A.shape
    transpose = p < n
    M = np.ascontiguousarray(A.T if transpose else A).copy()
    k = M.shape[1]
    W = np.eye(k)
    _, svd_sweep = _backend.get_kernels(backend)
    if k > 1 and np.any(M):
        P, Q = _backend.round_robin(k)
        floor = (_EPS * np.linalg.norm(M)) ** 2
        for _ in range(MAX_SWEEPS):
            if svd_sweep(M, W, P, Q, 1e-15, floor) == 0:
                break
        else:
            raise NumericError(f"one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")

    S = np.linalg.norm(M, axis=0)
    order = np.argsort(-S, kind="stable")
    S = S[order]
    M = M[:, order]
    W = W[:, order]
    tol = max(M.shape) * _EPS * (S[0] if S.size else 0.0)
    keep = S > tol
    left = np.zeros_like(M)
    left[:, keep] = M[:, keep] / S[keep]
    left = _complete_columns(left, keep)

    if transpose:
        # A.T = left @ diag(S) @ W.T  =>  A = W @ diag(S) @ left.T
        U, V = W, np.ascontiguousarray(left.T)
    else:
        U, V = left, np.ascontiguousarray(W.T)
    signs = fix_signs(V)
    U = U * signs
    return SvdFactors(U=np.ascontiguousarray(U), S=S, V=V)


def procrustes_rotation(X, Hbar, backend=None):
    """Orthogonal R maximizing ``trace(R.T @ X @ Hbar.T)``.

    With ``X @ Hbar.T = U diag(S) V`` the maximizer is ``U @ V``. A
    reflection is allowed; only ``R.T @ X`` is ever used.
    """
    X = as_matrix(X, "X")
    Hbar = as_matrix(Hbar, "Hbar")
    if X.shape != Hbar.shape:
        raise ValidationError(f"shape mismatch: X {X.shape} vs Hbar {Hbar.shape}")
    f = compact_svd(X @ Hbar.T, backend=backend)
    return f.U @ f.V
