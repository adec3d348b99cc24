"""Spectral sparse representation (SSR).

Sparse, noisy-indicator codes are obtained by rotating graph-Laplacian (or
SVD) eigenvectors with the NSCrt rotation/truncation solver; Scut clusters by
the largest code entry.
"""
from ._backend import BACKEND
from .cluster import kmeans, linear_pipelines, rcut_pipeline, scut
from .data import (
    gen_gaussian_mixture,
    gen_onion,
    gen_recovery_instance,
    load_csv,
    load_edge_list,
    load_iris,
)
from .errors import DataFormatError, NumericError, ValidationError
from .graph import build_knn_similarity, connected_components, laplacian, rho
from .linalg import compact_svd, procrustes_rotation, sym_eig
from .metrics import accuracy, hungarian, nmi, rand_index, rotation_recovery_score
from .nscrt import SparseCodes, nscrt, truncate
from .ssr import code_gram, dictionary, sparsity, ssrk, ssro, virtual_data

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DataFormatError", "NumericError", "SparseCodes", "ValidationError",
    "accuracy", "build_knn_similarity", "code_gram", "compact_svd", "connected_components",
    "dictionary", "gen_gaussian_mixture", "gen_onion", "gen_recovery_instance", "hungarian",
    "kmeans", "laplacian", "linear_pipelines", "load_csv", "load_edge_list", "load_iris", "nmi",
    "nscrt", "procrustes_rotation", "rand_index", "rcut_pipeline", "rho",
    "rotation_recovery_score", "scut", "sparsity", "ssrk", "ssro", "sym_eig", "truncate",
    "virtual_data",
]
