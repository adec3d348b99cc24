"""Seeded experiment sweeps behind the ``recovery-sweep`` and ``rho-sweep`` commands."""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import spearmanr

from . import cluster, data, graph, metrics, ssr
from .nscrt import nscrt, orthonormalize_rows

DEFAULT_NOISE_GRID = (1 / 32, 1 / 16, 1 / 8, 1 / 4)
DEFAULT_CASES = (("uniform", 2), ("uniform", 16), ("exponential", 9))
DEFAULT_SEPARATIONS = tuple(float(s) for s in np.round(np.linspace(1.0, 8.0, 10), 6))


def thread_count():
    try:
        return max(1, int(os.environ.get("SSR_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Ordered map, threaded up to ``SSR_THREADS`` workers."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def trial_seed(seed, *path):
    """Integer seed for one trial, derived from the run seed and its grid position."""
    return int(np.random.SeedSequence([seed, *path]).generate_state(1)[0])


def recovery_trial(profile, r, noise_a, seed, n=1024, lam=None):
    spec = data.RecoveryInstanceSpec(r=r, n=n, profile=profile, noise_a=noise_a, seed=seed)
    X, R_true, _ = data.gen_recovery_instance(spec)
    codes = nscrt(orthonormalize_rows(X), lam)
    return metrics.rotation_recovery_score(codes.R, R_true)


def recovery_sweep(cases=DEFAULT_CASES, noise_grid=DEFAULT_NOISE_GRID, trials=20, seed=0,
                   n=1024, lam=None):
    """Mean/std rotation-recovery score per (profile, r, noise level)."""
    rows = []
    for ci, (profile, r) in enumerate(cases):
        for ai, a in enumerate(noise_grid):
            scores = pmap(
                lambda t: recovery_trial(profile, r, a, trial_seed(seed, ci, ai, t), n, lam),
                range(trials),
            )
            rows.append({
                "profile": profile,
                "r": r,
                "noise_a": a,
                "method": "nscrt",
                "mean_score": float(np.mean(scores)),
                "std": float(np.std(scores)),
            })
    return rows


def rho_trial(separation, seed, k=4, K=3):
    A, y = data.gen_gaussian_mixture(data.gaussian_triangle_spec(separation, seed))
    W = graph.build_knn_similarity(A, k)
    res = ssr.ssrk(W, K)
    return (
        graph.rho_of_similarity(W, K).rho,
        ssr.mean_sparsity(res.H),
        metrics.accuracy(cluster.scut(res.H), y),
    )


def rho_sweep(separations=DEFAULT_SEPARATIONS, trials=50, seed=0, k=4):
    """Mean rho, mean code sparsity and Scut accuracy per centre separation."""
    rows = []
    for si, sep in enumerate(separations):
        out = np.array(pmap(lambda t: rho_trial(sep, trial_seed(seed, si, t), k), range(trials)))
        rows.append({
            "separation": float(sep),
            "rho": float(out[:, 0].mean()),
            "mean_sparsity": float(out[:, 1].mean()),
            "scut_accuracy": float(out[:, 2].mean()),
        })
    return rows


def spearman(x, y):
    """Spearman rank correlation (nan when either input is constant)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return float("nan")
    return float(spearmanr(x, y).statistic)
