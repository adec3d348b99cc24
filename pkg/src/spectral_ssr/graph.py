"""Similarity graphs, Laplacians, connected components and the rho eigengap."""
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from .errors import ValidationError
from .linalg import as_matrix, sym_eig

FLUSH_BELOW = 1e-300


@dataclass
class RhoReport:
    rho: float
    lambda_K: float
    lambda_K_plus_1: float
    K: int


def check_similarity(W):
    """Validate a similarity matrix and return it as an exactly symmetric array."""
    W = as_matrix(W, "W")
    n = W.shape[0]
    if W.shape != (n, n):
        raise ValidationError(f"W must be square, got shape {W.shape}")
    if np.any(W < 0):
        raise ValidationError("W has negative entries")
    if np.any(np.diag(W) != 0):
        raise ValidationError("W must have a zero diagonal")
    if np.linalg.norm(W - W.T) > 1e-12 * np.linalg.norm(W):
        raise ValidationError("W is not symmetric")
    return 0.5 * (W + W.T)


def knn_indices(D, k):
    """Indices of the k nearest neighbours of each row of a distance matrix.

    The point itself is excluded; ties go to the lower index.
    """
    n = D.shape[0]
    D = D.copy()
    np.fill_diagonal(D, np.inf)
    return np.argsort(D, axis=1, kind="stable")[:, :k]


def build_knn_similarity(points, k=4, mode="union", scale_k=None):
    """Self-tuning kNN similarity ``W_ij = exp(-d_ij^2 / (sigma_i sigma_j))``.

    Parameters
    ----------
    points : array_like, shape (p, n)
        Samples as columns.
    k : int
        Neighbourhood size; ``sigma_i`` is the distance to the k-th neighbour.
    mode : {"union", "mutual"}
        Keep an edge if either endpoint (union) or both (mutual) list the
        other among their k nearest neighbours.
    scale_k : int, optional
        Neighbour rank used for ``sigma_i`` (defaults to ``k``).
    """
    A = as_matrix(points, "points")
    n = A.shape[1]
    if not 1 <= k < n:
        raise ValidationError(f"k must satisfy 1 <= k < n={n}, got {k}")
    if mode not in ("union", "mutual"):
        raise ValidationError(f"mode must be 'union' or 'mutual', got {mode!r}")
    scale_k = k if scale_k is None else scale_k
    if not 1 <= scale_k < n:
        raise ValidationError(f"scale_k must satisfy 1 <= scale_k < n={n}, got {scale_k}")

    D2 = cdist(A.T, A.T, "sqeuclidean")
    D = np.sqrt(D2)
    nbrs = knn_indices(D, max(k, scale_k))
    rows = np.arange(n)
    sigma = D[rows, nbrs[:, scale_k - 1]]
    nbrs = nbrs[:, :k]
    if np.any(sigma == 0):
        positive = D[D > 0]
        if positive.size == 0:
            raise ValidationError("all points coincide; self-tuning scale is undefined")
        sigma = np.where(sigma == 0, positive.min(), sigma)

    adj = np.zeros((n, n), dtype=bool)
    adj[rows[:, None], nbrs] = True
    adj = adj | adj.T if mode == "union" else adj & adj.T
    W = np.where(adj, np.exp(-D2 / np.outer(sigma, sigma)), 0.0)
    W[W < FLUSH_BELOW] = 0.0
    np.fill_diagonal(W, 0.0)
    return W


def laplacian(W):
    """Unnormalized graph Laplacian ``diag(W 1) - W``."""
    W = check_similarity(W)
    return np.diag(W.sum(axis=1)) - W


def degrees(W):
    return check_similarity(W).sum(axis=1)


def connected_components(W):
    """Number of components and per-node labels of the graph ``W_ij > 0``."""
    W = check_similarity(W)
    count, labels = csgraph.connected_components(W > 0, directed=False)
    return int(count), labels


def _zero_tol(L):
    return 1e-12 * max(1.0, np.linalg.norm(L))


def rho(L, K, backend=None):
    """Eigengap ``(lambda_{K+1} - lambda_K) / lambda_{K+1}`` of a Laplacian.

    Eigenvalues within roundoff of zero are treated as zero; rho is 0 when
    ``lambda_{K+1}`` is zero.
    """
    L = as_matrix(L, "L")
    n = L.shape[0]
    if not 1 <= K < n:
        raise ValidationError(f"K must satisfy 1 <= K < n={n}, got {K}")
    values = sym_eig(L, K + 1, "smallest", backend=backend).values
    tol = _zero_tol(L)
    lam_k, lam_k1 = (0.0 if abs(v) <= tol else float(v) for v in values[K - 1:K + 1])
    if lam_k1 <= 0.0:
        value = 0.0
    else:
        value = min(1.0, max(0.0, (lam_k1 - lam_k) / lam_k1))
    return RhoReport(rho=value, lambda_K=lam_k, lambda_K_plus_1=lam_k1, K=K)


def rho_of_similarity(W, K, backend=None):
    return rho(laplacian(W), K, backend=backend)
