"""Label matching and clustering scores."""
import math

import numpy as np

from .errors import ValidationError

NMI_NORMALIZATION = "geometric"


def hungarian(cost):
    """Minimum-cost perfect assignment on a square matrix.

    Shortest augmenting path with row/column potentials, O(K^3). Returns
    ``perm`` with row ``i`` assigned to column ``perm[i]``.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValidationError(f"cost must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise ValidationError("cost has non-finite entries")
    n = cost.shape[0]
    # 1-based bookkeeping; column 0 is a virtual start
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match = np.zeros(n + 1, dtype=int)  # match[j] = row assigned to column j
    way = np.zeros(n + 1, dtype=int)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            free = ~used[1:]
            cols = np.nonzero(free)[0] + 1
            cur = cost[i0 - 1, cols - 1] - u[i0] - v[cols]
            better = cur < minv[cols]
            minv[cols[better]] = cur[better]
            way[cols[better]] = j0
            j1 = cols[np.argmin(minv[cols])]
            delta = minv[j1]
            u[match[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    perm = np.empty(n, dtype=int)
    for j in range(1, n + 1):
        perm[match[j] - 1] = j - 1
    return perm


def _labels(x):
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValidationError("labels must be 1-D")
    _, inv = np.unique(x, return_inverse=True)
    return inv.ravel()


def contingency(pred, truth):
    """Counts ``C[a, b]`` of samples with predicted label a and true label b."""
    p, t = _labels(pred), _labels(truth)
    if p.size != t.size:
        raise ValidationError(f"label lengths differ: {p.size} vs {t.size}")
    C = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(C, (p, t), 1)
    return C


def match_labels(pred, truth):
    """Relabel ``pred`` onto ``truth`` ids by maximum-overlap matching."""
    p, t = _labels(pred), np.asarray(truth)
    C = contingency(pred, truth)
    K = max(C.shape)
    square = np.zeros((K, K))
    square[: C.shape[0], : C.shape[1]] = C
    perm = hungarian(-square)
    truth_ids = np.unique(t)
    out = np.empty_like(p)
    for a in range(C.shape[0]):
        b = perm[a]
        out[p == a] = truth_ids[b] if b < truth_ids.size else truth_ids.size + a
    return out


def accuracy(pred, truth):
    """Fraction of samples correct under the best one-to-one label matching."""
    C = contingency(pred, truth)
    K = max(C.shape)
    square = np.zeros((K, K))
    square[: C.shape[0], : C.shape[1]] = C
    perm = hungarian(-square)
    return float(square[np.arange(K), perm].sum() / C.sum())


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth):
    """Mutual information over the geometric mean of the two entropies (nats).

    A single-cluster partition has zero entropy: NMI is then 1 if both
    partitions are that same single cluster, else 0.
    """
    C = contingency(pred, truth)
    n = C.sum()
    h_pred = _entropy(C.sum(axis=1), n)
    h_true = _entropy(C.sum(axis=0), n)
    if h_pred == 0.0 or h_true == 0.0:
        return 1.0 if h_pred == 0.0 and h_true == 0.0 else 0.0
    nz = C > 0
    joint = C[nz] / n
    outer = np.outer(C.sum(axis=1), C.sum(axis=0))[nz] / (n * n)
    mi = float((joint * np.log(joint / outer)).sum())
    return max(0.0, min(1.0, mi / math.sqrt(h_pred * h_true)))


def rand_index(pred, truth):
    """Plain (unadjusted) Rand index: fraction of sample pairs treated alike."""
    C = contingency(pred, truth)
    n = int(C.sum())
    if n < 2:
        raise ValidationError("Rand index needs at least two samples")
    pairs = n * (n - 1) // 2
    same_both = int((C * (C - 1) // 2).sum())
    same_pred = int((C.sum(axis=1) * (C.sum(axis=1) - 1) // 2).sum())
    same_true = int((C.sum(axis=0) * (C.sum(axis=0) - 1) // 2).sum())
    agree = pairs + 2 * same_both - same_pred - same_true
    return agree / pairs


def within_class_ratio(X, truth):
    """Within-class scatter over total scatter for samples in the columns of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    t = _labels(truth)
    if t.size != X.shape[1]:
        raise ValidationError("label count does not match sample count")
    total = float(((X - X.mean(axis=1, keepdims=True)) ** 2).sum())
    if total == 0.0:
        raise ValidationError("total scatter is zero")
    within = 0.0
    for k in np.unique(t):
        Xk = X[:, t == k]
        within += float(((Xk - Xk.mean(axis=1, keepdims=True)) ** 2).sum())
    return within / total


def rotation_recovery_score(R_hat, R_true):
    """Mean ``|cos|`` between matched columns of two orthogonal matrices."""
    R_hat = np.asarray(R_hat, dtype=float)
    R_true = np.asarray(R_true, dtype=float)
    if R_hat.shape != R_true.shape or R_hat.shape[0] != R_hat.shape[1]:
        raise ValidationError("rotation matrices must be square and of equal size")
    C = np.abs(R_hat.T @ R_true)
    perm = hungarian(-C)
    return float(C[np.arange(C.shape[0]), perm].mean())


def score_all(pred, truth):
    return {
        "accuracy": accuracy(pred, truth),
        "nmi": nmi(pred, truth),
        "rand_index": rand_index(pred, truth),
    }
