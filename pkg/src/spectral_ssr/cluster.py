"""Clustering front-ends: Scut, Lloyd K-means and the eigenvector pipelines."""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ValidationError
from .graph import check_similarity, laplacian
from .linalg import as_matrix, compact_svd, sym_eig
from .ssr import center, numerical_rank

MAX_LLOYD_ITER = 300


@dataclass
class KmeansResult:
    labels: np.ndarray
    centers: np.ndarray
    objective: float
    iterations: int
    history: list = field(default_factory=list)


def scut(H):
    """Label each column by the row of its largest entry (lowest row on ties)."""
    H = getattr(H, "H", H)
    H = as_matrix(H, "H")
    return np.argmax(H, axis=0)


def kmeans_objective(A, labels, centers):
    return float(((A - centers[:, labels]) ** 2).sum())


def _lloyd(A, K, rng):
    n = A.shape[1]
    centers = A[:, rng.choice(n, size=K, replace=False)].copy()
    labels = None
    history = []
    it = 0
    for it in range(1, MAX_LLOYD_ITER + 1):
        d = cdist(A.T, centers.T, "sqeuclidean")
        new = np.argmin(d, axis=1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for k in range(K):
            members = labels == k
            if members.any():
                centers[:, k] = A[:, members].mean(axis=1)
        history.append(kmeans_objective(A, labels, centers))
        # empty clusters take the point farthest from its own centre
        for k in range(K):
            if not np.any(labels == k):
                far = int(np.argmax(((A - centers[:, labels]) ** 2).sum(axis=0)))
                centers[:, k] = A[:, far]
    return labels, centers, it, history


def kmeans(A, K, seed=0, restarts=20):
    """Lloyd K-means from random distinct data points, best of ``restarts``.

    Each restart draws from its own child of ``SeedSequence(seed)``, so the
    result does not depend on the order restarts are run in.
    """
    A = as_matrix(A, "A")
    n = A.shape[1]
    if not 1 <= K <= n:
        raise ValidationError(f"K must satisfy 1 <= K <= n={n}, got {K}")
    if restarts < 1:
        raise ValidationError(f"restarts must be >= 1, got {restarts}")
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        labels, centers, it, history = _lloyd(A, K, np.random.default_rng(child))
        obj = kmeans_objective(A, labels, centers)
        if best is None or obj < best.objective:
            best = KmeansResult(labels, centers, obj, it, history)
    return best


def kmeans_runs(A, K, seed=0, restarts=20):
    """Every restart of :func:`kmeans`, in order."""
    A = as_matrix(A, "A")
    out = []
    for child in np.random.SeedSequence(seed).spawn(restarts):
        labels, centers, it, history = _lloyd(A, K, np.random.default_rng(child))
        out.append(KmeansResult(labels, centers, kmeans_objective(A, labels, centers), it, history))
    return out


def spectral_embedding(W, K, backend=None):
    W = check_similarity(W)
    if not 1 <= K <= W.shape[0]:
        raise ValidationError(f"K must satisfy 1 <= K <= n={W.shape[0]}, got {K}")
    return sym_eig(laplacian(W), K, "smallest", backend=backend).vectors


def rcut_pipeline(W, K, seed=0, restarts=20, backend=None):
    """Ratio cut: K-means on the columns of the K smallest Laplacian eigenvectors."""
    return kmeans(spectral_embedding(W, K, backend), K, seed, restarts).labels


def linear_embedding(A, K, variant, backend=None):
    A = center(A)
    if variant not in ("kpc", "rcuto"):
        raise ValidationError(f"variant must be 'kpc' or 'rcuto', got {variant!r}")
    if K < 2:
        return np.zeros((1, A.shape[1]))
    svd = compact_svd(A, backend=backend)
    if K - 1 > numerical_rank(svd.S, A.shape):
        raise ValidationError(f"K - 1 = {K - 1} exceeds rank(A)")
    svd = svd.truncate(K - 1)
    return svd.S[:, None] * svd.V if variant == "kpc" else svd.V


def linear_pipelines(A, K, seed=0, restarts=20, variant="kpc", backend=None):
    """K-PC (K-means on principal components) or Rcuto (K-means on V_{1:K-1})."""
    return kmeans(linear_embedding(A, K, variant.lower(), backend), K, seed, restarts).labels
