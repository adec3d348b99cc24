"""Nonnegative sparse coding by rotation and truncation.

Given row-orthonormal ``X`` (r x n), alternate

    H    <- R.T @ X
    Hbar <- H with entries below lambda zeroed
    R    <- Procrustes fit of X onto Hbar

starting from ``R = I``, which decreases ``||X - R Hbar||_F^2 + lambda^2 nnz(Hbar)``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import as_matrix, procrustes_rotation, sym_eig


@dataclass
class SparseCodes:
    H: np.ndarray
    Hbar: np.ndarray
    R: np.ndarray
    iterations: int
    converged: bool
    lam: float
    objective: list = field(default_factory=list)


def default_lambda(n):
    return 0.6 / np.sqrt(n)


def truncate(H, lam):
    """Keep entries ``>= lam``; everything else (negatives included) becomes 0."""
    H = np.asarray(H, dtype=float)
    if not 0.0 < lam < 1.0:
        raise ValidationError(f"lambda must lie in (0, 1), got {lam}")
    return np.where(H >= lam, H, 0.0)


def objective(X, R, Hbar, lam):
    return float(np.linalg.norm(X - R @ Hbar) ** 2 + lam * lam * np.count_nonzero(Hbar))


def nscrt(X, lam=None, max_iter=200, tol=0.01, check=True, backend=None):
    """Solve for a rotation R and sparse codes ``H = R.T @ X``.

    Parameters
    ----------
    X : array_like, shape (r, n)
        Row-orthonormal input (e.g. eigenvectors as rows).
    lam : float, optional
        Truncation threshold in (0, 1); ``0.6 / sqrt(n)`` by default.
    max_iter : int
        Cap on rotation updates.
    tol : float
        Stop once ``||R_t - R_{t-1}||_F / sqrt(r) <= tol``.
    check : bool
        Require ``X X^T = I`` within 1e-6.

    Returns
    -------
    SparseCodes
        ``H`` and ``Hbar`` correspond to the returned ``R``. If truncation
        wipes out every entry the solver stops early with
        ``converged=False``; a smaller lambda is needed.
    """
    X = as_matrix(X, "X")
    r, n = X.shape
    if lam is None:
        lam = default_lambda(n)
    if not 0.0 < lam < 1.0:
        raise ValidationError(f"lambda must lie in (0, 1), got {lam}")
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    if check:
        err = np.abs(X @ X.T - np.eye(r)).max()
        if err > 1e-6:
            raise ValidationError(f"X rows are not orthonormal (max |XX^T - I| = {err:.2e})")

    R = np.eye(r)
    history = []
    converged = False
    it = 0
    while it < max_iter:
        H = R.T @ X
        Hbar = truncate(H, lam)
        if not Hbar.any():
            return SparseCodes(H, Hbar, R, it, False, lam, history)
        history.append(objective(X, R, Hbar, lam))
        R_new = procrustes_rotation(X, Hbar, backend=backend)
        it += 1
        step = np.linalg.norm(R_new - R) / np.sqrt(r)
        R = R_new
        if step <= tol:
            converged = True
            break

    H = R.T @ X
    Hbar = truncate(H, lam)
    history.append(objective(X, R, Hbar, lam))
    return SparseCodes(H, Hbar, R, it, converged, lam, history)


def orthonormalize_rows(X):
    """Symmetric (Loewdin) orthonormalization ``(X X^T)^{-1/2} X``.

    Commutes with left rotations: for ``X = R M`` the result is
    ``R (M M^T)^{-1/2} M``, so the rotation factor is preserved.
    """
    X = as_matrix(X, "X")
    e = sym_eig(X @ X.T)
    if e.values[0] <= 0:
        raise ValidationError("X has linearly dependent rows")
    Vt = e.vectors.T
    return (Vt / np.sqrt(e.values)) @ Vt.T @ X
