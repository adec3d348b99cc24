"""Spectral sparse representation pipelines (kernel and original-data versions)."""
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graph import check_similarity, laplacian
from .linalg import EigenBasis, SvdFactors, as_matrix, compact_svd, sym_eig
from .nscrt import SparseCodes, default_lambda, nscrt


@dataclass
class SsrResult:
    codes: SparseCodes
    eigen: object  # EigenBasis (kernel) or SvdFactors (original)
    variant: str
    r: int
    lam: float

    @property
    def H(self):
        return self.codes.H


def ssrk(W, r, lam=None, max_iter=200, tol=0.01, backend=None):
    """Kernel SSR: NSCrt on the r smallest Laplacian eigenvectors of W."""
    W = check_similarity(W)
    n = W.shape[0]
    if not 1 <= r <= n:
        raise ValidationError(f"r must satisfy 1 <= r <= n={n}, got {r}")
    if lam is None:
        lam = default_lambda(n)
    eigen = _smallest_with_constant(laplacian(W), r, backend)
    codes = nscrt(eigen.vectors, lam, max_iter=max_iter, tol=tol, backend=backend)
    return SsrResult(codes, eigen, "kernel", r, lam)


def _smallest_with_constant(L, r, backend=None):
    """r smallest eigenpairs of L, with a basis containing the constant vector.

    ``L 1 = 0`` always, so when the zero eigenspace is wider than r (more
    components than r) the selected basis is rotated within that space to
    include ``1/sqrt(n)``. Otherwise the plain selection already spans it.
    """
    n = L.shape[0]
    full = sym_eig(L, backend=backend)
    zero = np.abs(full.values) <= 1e-12 * max(1.0, np.linalg.norm(L))
    m = int(zero.sum())
    if m <= r:
        return EigenBasis(full.vectors[:r].copy(), full.values[:r].copy(), n, full.sweeps)
    u = np.full(n, 1.0 / np.sqrt(n))
    Z = full.vectors[zero]
    Z = Z - np.outer(Z @ u, u)
    rest = compact_svd(Z, backend=backend).V[: r - 1]
    vectors = np.vstack([u, rest])
    return EigenBasis(vectors, np.zeros(r), n, full.sweeps)


def center(A):
    """Subtract the mean column."""
    A = as_matrix(A, "A")
    return A - A.mean(axis=1, keepdims=True)


def numerical_rank(S, shape):
    if S.size == 0 or S[0] == 0:
        return 0
    return int(np.sum(S > max(shape) * np.finfo(float).eps * S[0]))


def ssro(A, r, lam=None, max_iter=200, tol=0.01, backend=None):
    """Original-data SSR: NSCrt on ``[1/sqrt(n) 1^T ; V_{1:r-1}]`` from the SVD of A.

    A must be mean-removed (``A 1 = 0`` within ``1e-8 ||A||_F``); the residual
    mean is then subtracted exactly.
    """
    A = as_matrix(A, "A")
    p, n = A.shape
    scale = np.linalg.norm(A)
    if np.linalg.norm(A.sum(axis=1)) > 1e-8 * max(scale, np.finfo(float).tiny):
        raise ValidationError("A is not mean-removed; center it first (spectral_ssr.ssr.center)")
    A = center(A)
    if r < 1:
        raise ValidationError(f"r must be >= 1, got {r}")
    svd = compact_svd(A, backend=backend)
    rank = numerical_rank(svd.S, A.shape)
    if r - 1 > rank:
        raise ValidationError(f"r - 1 = {r - 1} exceeds rank(A) = {rank}")
    if lam is None:
        lam = default_lambda(n)
    svd = svd.truncate(r - 1)
    X = np.vstack([np.full((1, n), 1.0 / np.sqrt(n)), svd.V])
    codes = nscrt(X, lam, max_iter=max_iter, tol=tol, backend=backend)
    return SsrResult(codes, svd, "original", r, lam)


def linear_kernel_similarity(A):
    """``W = beta 1 1^T + A^T A`` with ``beta = -min(A^T A)`` so W is nonnegative.

    The diagonal is zeroed; it does not enter the Laplacian.
    """
    A = as_matrix(A, "A")
    G = A.T @ A
    beta = max(0.0, -G.min())
    W = beta + G
    W = 0.5 * (W + W.T)
    np.fill_diagonal(W, 0.0)
    return np.maximum(W, 0.0)


def virtual_data(eigen):
    """``(lambda_n I - Lambda)^{1/2} V`` from the full spectrum of a Laplacian."""
    if eigen.vectors.shape[0] != eigen.source_dim:
        raise ValidationError("virtual data needs all n eigenpairs")
    lam_max = eigen.values[-1]
    weights = np.sqrt(np.maximum(lam_max - eigen.values, 0.0))
    return weights[:, None] * eigen.vectors


def dictionary(source, H):
    """Atoms ``source @ H.T`` (one per code row)."""
    source = as_matrix(source, "source")
    H = as_matrix(H, "H")
    if source.shape[1] != H.shape[1]:
        raise ValidationError(
            f"column counts differ: source has {source.shape[1]}, H has {H.shape[1]}"
        )
    return source @ H.T


def coherence_ratio(D, lam_max):
    """``||D^T D - lambda_n I||_F / (lambda_n sqrt(r))``; small for a near-ideal graph."""
    r = D.shape[1]
    return float(np.linalg.norm(D.T @ D - lam_max * np.eye(r)) / (lam_max * np.sqrt(r)))


def mutual_coherence(D):
    norms = np.linalg.norm(D, axis=0)
    G = np.abs(D.T @ D) / np.outer(norms, norms)
    np.fill_diagonal(G, 0.0)
    return float(G.max()) if G.size > 1 else 0.0


def code_gram(H):
    """Gram matrix of the codes, ``H^T H``; its columns sum to one."""
    H = as_matrix(H, "H")
    return H.T @ H


def weight_sum_error(H):
    return float(np.abs(code_gram(H).sum(axis=0) - 1.0).max())


def sparsity(x):
    """``||x||_2 / ||x||_1``, between ``1/sqrt(n)`` (flat) and 1 (one-hot)."""
    x = np.asarray(x, dtype=float).ravel()
    l1 = np.abs(x).sum()
    if l1 == 0:
        raise ValidationError("sparsity of the zero vector is undefined")
    return float(np.linalg.norm(x) / l1)


def mean_sparsity(H):
    """Mean column sparsity of a code matrix (zero columns are skipped)."""
    H = as_matrix(H, "H")
    l1 = np.abs(H).sum(axis=0)
    keep = l1 > 0
    return float(np.mean(np.linalg.norm(H[:, keep], axis=0) / l1[keep]))
