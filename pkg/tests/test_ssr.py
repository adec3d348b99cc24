import numpy as np
import pytest

from spectral_ssr import cluster, data, graph, metrics, ssr
from spectral_ssr.errors import ValidationError
from spectral_ssr.linalg import sym_eig

from conftest import block_graph


def _same_rows_up_to_perm(A, B, tol=1e-8):
    used = set()
    for row in A:
        hit = [i for i in range(len(B)) if i not in used and np.abs(row - B[i]).max() < tol]
        if not hit:
            return False
        used.add(hit[0])
    return True


def test_ideal_graph_gives_indicator(rng):
    W, y = block_graph([6, 9, 12], rng)
    res = ssr.ssrk(W, 3)
    assert _same_rows_up_to_perm(res.H, data.indicator_matrix(y))
    assert metrics.accuracy(cluster.scut(res.H), y) == 1.0


def test_more_components_than_r_keeps_weight_sum(rng):
    W, y = block_graph([5, 5, 5, 5], rng)
    res = ssr.ssrk(W, 2)
    assert ssr.weight_sum_error(res.H) < 1e-10
    V = res.eigen.vectors
    assert np.allclose(V @ V.T, np.eye(2))
    assert np.allclose(graph.laplacian(W) @ V.T, 0, atol=1e-10)


def test_separated_gaussians_scut():
    A, y = data.gaussian_preset("g1", 0)
    res = ssr.ssrk(graph.build_knn_similarity(A, 4), 3)
    assert metrics.accuracy(cluster.scut(res.H), y) == 1.0


def test_overlapping_gaussians_codes_dominated():
    A, y = data.gaussian_preset("g3", 0)
    H = ssr.ssrk(graph.build_knn_similarity(A, 4), 3).H
    top = np.sort(H, axis=0)[::-1]
    # most columns are dominated by a single entry; some columns mix rows
    assert np.mean(top[0] > 2 * np.abs(top[1])) > 0.6
    assert np.mean(top[1] > 0.2 * top[0]) > 0.0


def test_ssro_r1_is_constant():
    A, _ = data.gaussian_preset("g1", 0)
    res = ssr.ssro(ssr.center(A), 1)
    assert np.allclose(res.H, 1 / np.sqrt(A.shape[1]))


def test_ssro_orthogonal_clusters(rng):
    A = np.zeros((2, 40))
    A[0, :20] = 5 + 0.05 * rng.standard_normal(20)
    A[1, 20:] = 5 + 0.05 * rng.standard_normal(20)
    A = ssr.center(A)
    W = ssr.linear_kernel_similarity(A)
    assert graph.rho_of_similarity(W, 2).rho > 0.9
    res = ssr.ssro(A, 2)
    y = np.repeat([0, 1], 20)
    assert metrics.accuracy(cluster.scut(res.H), y) == 1.0
    assert np.abs(res.H - data.indicator_matrix(y)[[0, 1]]).max() < 0.1 or \
        np.abs(res.H - data.indicator_matrix(y)[[1, 0]]).max() < 0.1


def test_ssro_g2_mid_nineties():
    acc = [metrics.accuracy(cluster.scut(ssr.ssro(ssr.center(A), 3).H), y)
           for A, y in (data.gaussian_preset("g2", s) for s in range(5))]
    assert 0.9 <= np.mean(acc) <= 1.0


def test_ssro_validation(rng):
    A = rng.standard_normal((3, 10)) + 5
    with pytest.raises(ValidationError):
        ssr.ssro(A, 2)
    with pytest.raises(ValidationError):
        ssr.ssro(ssr.center(A), 5)


def test_virtual_data(rng):
    L0 = np.zeros((3, 3))
    assert not ssr.virtual_data(sym_eig(L0)).any()
    W = np.array([[0.0, 1.0], [1.0, 0.0]])
    Vd = ssr.virtual_data(sym_eig(graph.laplacian(W)))
    norms = np.linalg.norm(Vd, axis=1)
    assert np.isclose(norms[0], np.sqrt(2)) and norms[1] == 0
    for _ in range(5):
        W, _ = block_graph([4, 5], rng)
        W[0, -1] = W[-1, 0] = 0.3
        L = graph.laplacian(W)
        e = sym_eig(L)
        At = ssr.virtual_data(e)
        n, lam_n = L.shape[0], e.values[-1]
        assert np.linalg.norm(At.T @ At - (lam_n * np.eye(n) - L)) <= 1e-7 * lam_n * n


def test_dictionary_atoms_are_scaled_means(rng):
    A = rng.standard_normal((3, 9))
    y = np.repeat([0, 1, 2], 3)
    D = ssr.dictionary(A, data.indicator_matrix(y))
    for k in range(3):
        assert np.allclose(D[:, k], A[:, y == k].sum(axis=1) / np.sqrt(3))


def test_kernel_reconstruction_trailing_spectrum(rng):
    for _ in range(5):
        W, _ = block_graph([5, 7], rng)
        W[0, 1:4] = W[1:4, 0] = 0.2
        W[np.diag_indices_from(W)] = 0
        r = 3
        res = ssr.ssrk(W, r)
        e = sym_eig(graph.laplacian(W))
        At = ssr.virtual_data(e)
        D = ssr.dictionary(At, res.H)
        err = np.linalg.norm(At - D @ res.H) ** 2
        lam = e.values
        assert np.isclose(err, (lam[-1] - lam[r:]).sum(), rtol=1e-6)


def test_near_ideal_dictionary_coherence():
    A, _ = data.gaussian_preset("g1", 0)
    W = graph.build_knn_similarity(A, 4)
    res = ssr.ssrk(W, 3)
    e = sym_eig(graph.laplacian(W))
    D = ssr.dictionary(ssr.virtual_data(e), res.H)
    assert ssr.coherence_ratio(D, e.values[-1]) < 0.05
    assert ssr.mutual_coherence(D) < 1e-8


def test_code_gram(rng):
    y = np.repeat([0, 1], [2, 3])
    G = ssr.code_gram(data.indicator_matrix(y))
    assert np.allclose(G[:2, :2], 0.5) and np.allclose(G[2:, 2:], 1 / 3)
    assert np.allclose(G[:2, 2:], 0)


def test_truncated_gram_column_sums_near_one():
    A, _ = data.gaussian_preset("g1", 0)
    Hb = ssr.ssrk(graph.build_knn_similarity(A, 4), 3).codes.Hbar
    assert abs((Hb.T @ Hb).sum(axis=0).mean() - 1.0) < 0.05


def test_sparsity():
    assert ssr.sparsity([0, 0, 2.0]) == 1.0
    assert np.isclose(ssr.sparsity(np.ones(16)), 0.25)
    assert np.isclose(ssr.sparsity([3, 4]), 5 / 7)
    with pytest.raises(ValidationError):
        ssr.sparsity([0, 0])


def test_linear_kernel_similarity_is_valid(rng):
    W = ssr.linear_kernel_similarity(rng.standard_normal((3, 10)))
    graph.check_similarity(W)
