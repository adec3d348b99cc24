"""Synthetic generators and dataset I/O.

Matrices are held with samples as columns (p x n). On disk, CSV files store
one sample per row.
"""
import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataFormatError, ValidationError
from .linalg import as_matrix

# equilateral-triangle side length of the three Gaussian centres
GAUSSIAN_PRESETS = {"g1": 8.0, "g2": 4.0, "g3": 2.5}


@dataclass
class GaussianMixtureSpec:
    """Isotropic Gaussian components as ``(center, scale, count)`` triples."""

    components: list
    seed: int = 0

    def __post_init__(self):
        if not self.components:
            raise ValidationError("mixture needs at least one component")
        dims = set()
        for center, scale, count in self.components:
            if count < 1:
                raise ValidationError(f"component count must be >= 1, got {count}")
            if not scale > 0:
                raise ValidationError(f"component scale must be > 0, got {scale}")
            dims.add(np.size(center))
        if len(dims) != 1:
            raise ValidationError("component centers differ in dimension")


@dataclass
class RecoveryInstanceSpec:
    r: int
    n: int = 1024
    profile: str = "uniform"
    noise_a: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.profile not in ("uniform", "exponential"):
            raise ValidationError(f"profile must be uniform or exponential, got {self.profile!r}")
        if self.r < 1 or self.n < self.r:
            raise ValidationError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.profile == "uniform" and self.n % self.r:
            raise ValidationError(f"uniform profile needs r | n, got r={self.r}, n={self.n}")
        if self.profile == "exponential" and 2 ** self.r - 2 >= self.n:
            raise ValidationError(f"exponential profile needs n > 2^r - 2, got n={self.n}")
        if self.noise_a < 0:
            raise ValidationError("noise_a must be nonnegative")


def gen_gaussian_mixture(spec):
    """Sample a Gaussian mixture; returns ``(A, labels)`` with A of shape (p, n)."""
    rng = np.random.default_rng(spec.seed)
    blocks, labels = [], []
    for k, (center, scale, count) in enumerate(spec.components):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        blocks.append(center[:, None] + scale * rng.standard_normal((center.size, count)))
        labels.append(np.full(count, k))
    return np.hstack(blocks), np.concatenate(labels)


def triangle_centers(side):
    radius = side / math.sqrt(3.0)
    angles = np.deg2rad([90.0, 210.0, 330.0])
    return [radius * np.array([np.cos(a), np.sin(a)]) for a in angles]


def gaussian_triangle_spec(side, seed=0, count=50, scale=1.0):
    return GaussianMixtureSpec([(c, scale, count) for c in triangle_centers(side)], seed)


def gaussian_preset(name, seed=0):
    """G1/G2/G3: three unit-variance 2-D Gaussians, 50 points each, decreasing spacing."""
    try:
        side = GAUSSIAN_PRESETS[name.lower()]
    except KeyError:
        raise ValidationError(f"unknown Gaussian preset {name!r}") from None
    return gen_gaussian_mixture(gaussian_triangle_spec(side, seed))


def gen_onion(seed=0):
    """Unbalanced 2-D onion: a 5-point core inside rings of 20 and 50 points."""
    rng = np.random.default_rng(seed)
    core = 0.15 * rng.standard_normal((2, 5))
    parts = [core]
    for radius, count, noise in ((1.5, 20, 0.08), (3.5, 50, 0.12)):
        step = 2 * np.pi / count
        angle = rng.uniform(0.0, step) + step * (np.arange(count) + 0.3 * rng.uniform(-1, 1, count))
        rad = radius + noise * rng.standard_normal(count)
        parts.append(np.vstack([rad * np.cos(angle), rad * np.sin(angle)]))
    labels = np.repeat([0, 1, 2], [5, 20, 50])
    return np.hstack(parts), labels


def cluster_sizes(profile, r, n):
    if profile == "uniform":
        return [n // r] * r
    sizes = [2 ** k for k in range(1, r)]
    return sizes + [n - sum(sizes)]


def indicator_matrix(labels, K=None):
    """Normalized indicator: row k holds ``1/sqrt(n_k)`` on members of cluster k."""
    labels = np.asarray(labels)
    if K is None:
        K = int(labels.max()) + 1
    H = np.zeros((K, labels.size))
    for k in range(K):
        members = labels == k
        if members.any():
            H[k, members] = 1.0 / math.sqrt(members.sum())
    return H


def random_rotation(r, rng):
    """Haar-random orthogonal matrix with determinant +1."""
    Q, Rf = np.linalg.qr(rng.standard_normal((r, r)))
    Q = Q * np.where(np.diag(Rf) < 0, -1.0, 1.0)
    if np.linalg.det(Q) < 0:
        Q[:, -1] = -Q[:, -1]
    return Q


def gen_recovery_instance(spec):
    """Synthesize ``X = R (H* + E)`` for the rotation-recovery experiment.

    Returns ``(X, R_true, H_star)``; E has i.i.d. N(0, sigma^2) entries with
    ``sigma = noise_a / max_k sqrt(n_k)``.
    """
    rng = np.random.default_rng(spec.seed)
    sizes = cluster_sizes(spec.profile, spec.r, spec.n)
    labels = np.repeat(np.arange(spec.r), sizes)
    H_star = indicator_matrix(labels, spec.r)
    R_true = random_rotation(spec.r, rng)
    sigma = spec.noise_a / math.sqrt(max(sizes))
    E = sigma * rng.standard_normal(H_star.shape)
    X = R_true @ (H_star + E)
    return X, R_true, H_star


def _relabel(raw):
    uniq, inv = np.unique(np.asarray(raw), return_inverse=True)
    return inv.astype(int), list(uniq)


def load_csv(path, has_labels=False):
    """Read samples stored one per row; returns ``(A, labels)`` with A (p, n).

    Lines starting with ``#`` are skipped. With ``has_labels`` the last column
    is a class label; labels are re-indexed to ``0..K-1`` in sorted order.
    """
    path = Path(path)
    rows, raw_labels, width = [], [], None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataFormatError(f"expected {width} fields, found {len(row)}", path, lineno)
            if has_labels:
                raw_labels.append(row[-1].strip())
                row = row[:-1]
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise DataFormatError(f"non-numeric cell ({exc})", path, lineno) from None
    if not rows or not rows[0]:
        raise DataFormatError("no numeric data", path)
    A = np.array(rows).T
    if not np.all(np.isfinite(A)):
        raise DataFormatError("non-finite values", path)
    if not has_labels:
        return A, None
    try:
        numeric = [float(x) for x in raw_labels]
    except ValueError:
        labels, _ = _relabel(raw_labels)
    else:
        labels, _ = _relabel(numeric)
    return A, labels


def save_csv(path, A, labels=None, header=None):
    """Write samples one per row with 17 significant digits (exact round-trip)."""
    A = as_matrix(A, "A")
    with open(path, "w", newline="") as fh:
        if header:
            for line in str(header).splitlines():
                fh.write(f"# {line}\n")
        for i in range(A.shape[1]):
            cells = [format(v, ".17g") for v in A[:, i]]
            if labels is not None:
                cells.append(str(int(labels[i])))
            fh.write(",".join(cells) + "\n")


def load_labels(path):
    """Read one label per line (or the last column of a CSV) re-indexed to 0..K-1."""
    raw = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            raw.append(line.split(",")[-1].strip())
    if not raw:
        raise DataFormatError("no labels", path)
    try:
        return _relabel([float(x) for x in raw])[0]
    except ValueError:
        return _relabel(raw)[0]


def load_edge_list(path, one_based=None, n=None):
    """Similarity matrix from ``i j [w]`` lines.

    A comment line containing ``one-based`` marks 1-based indices (the
    ``one_based`` argument overrides it). Self-loops are dropped and repeated
    edges keep the largest weight.
    """
    path = Path(path)
    edges = []
    header_one_based = False
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                if "one-based" in text.lower():
                    header_one_based = True
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise DataFormatError(f"expected 'i j [w]', got {text!r}", path, lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise DataFormatError(f"bad edge {text!r}", path, lineno) from None
            if not math.isfinite(w):
                raise DataFormatError("non-finite weight", path, lineno)
            if w < 0:
                raise ValidationError(f"{path}:{lineno}: negative edge weight {w}")
            edges.append((i, j, w, lineno))
    if not edges:
        raise DataFormatError("no edges", path)
    shift = 1 if (header_one_based if one_based is None else one_based) else 0
    size = max(max(i, j) for i, j, _, _ in edges) + 1 - shift
    if n is not None:
        if n < size:
            raise ValidationError(f"n={n} is smaller than the largest node index")
        size = n
    W = np.zeros((size, size))
    for i, j, w, lineno in edges:
        i, j = i - shift, j - shift
        if i < 0 or j < 0:
            raise DataFormatError("negative node index", path, lineno)
        if i == j:
            continue
        w = max(W[i, j], w)
        W[i, j] = W[j, i] = w
    return W


def iris_path():
    return resources.files("spectral_ssr").joinpath("datasets/iris.csv")


def load_iris():
    """Bundled Fisher iris: ``(A, labels)`` with A of shape (4, 150)."""
    with resources.as_file(iris_path()) as p:
        return load_csv(p, has_labels=True)


def load_preset(name, seed=0):
    name = name.lower()
    if name in GAUSSIAN_PRESETS:
        return gaussian_preset(name, seed)
    if name == "onion":
        return gen_onion(seed)
    if name == "iris":
        return load_iris()
    raise ValidationError(f"unknown preset {name!r}")


PRESETS = sorted(GAUSSIAN_PRESETS) + ["iris", "onion"]
