import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from spectral_ssr import metrics
from spectral_ssr.data import random_rotation
from spectral_ssr.errors import ValidationError


def _brute_min(cost):
    n = cost.shape[0]
    return min(cost[np.arange(n), list(p)].sum() for p in itertools.permutations(range(n)))


def test_hungarian_identity_like():
    cost = np.ones((4, 4)) - np.eye(4)
    assert np.array_equal(metrics.hungarian(cost), np.arange(4))


def test_hungarian_hand_example():
    cost = np.array([[4, 1, 3], [2, 0, 5], [3, 2, 2]], float)
    perm = metrics.hungarian(cost)
    assert list(perm) == [1, 0, 2]
    assert cost[np.arange(3), perm].sum() == 5 == _brute_min(cost)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: arrays(float, (n, n), elements=st.floats(-100, 100, allow_subnormal=False))))
def test_hungarian_matches_exhaustive(cost):
    perm = metrics.hungarian(cost)
    assert sorted(perm) == list(range(cost.shape[0]))
    total = cost[np.arange(cost.shape[0]), perm].sum()
    assert total <= _brute_min(cost) + 1e-9 * max(1.0, np.abs(cost).sum())


def test_hungarian_rejects():
    with pytest.raises(ValidationError):
        metrics.hungarian(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        metrics.hungarian([[np.inf]])


def test_accuracy_examples():
    y = np.array([0, 0, 1, 1, 2, 2])
    assert metrics.accuracy(y, y) == 1.0
    assert metrics.accuracy((y + 1) % 3, y) == 1.0
    truth = np.repeat([0, 1], 4)
    pred = np.array([0, 0, 1, 1, 1, 1, 1, 1])
    assert metrics.accuracy(pred, truth) == 0.75


def test_accuracy_unequal_cluster_counts():
    assert metrics.accuracy([0, 0, 0, 0], [0, 0, 1, 1]) == 0.5
    assert metrics.accuracy([0, 1, 2, 3], [0, 0, 1, 1]) == 0.5


def test_match_labels_relabels_onto_truth():
    truth = np.array([5, 5, 7, 7])
    assert np.array_equal(metrics.match_labels([1, 1, 0, 0], truth), truth)


def _nmi_oracle(p, t):
    n = len(p)
    mi = hp = ht = 0.0
    for a in set(p):
        pa = sum(1 for x in p if x == a) / n
        hp -= pa * math.log(pa)
    for b in set(t):
        pb = sum(1 for x in t if x == b) / n
        ht -= pb * math.log(pb)
    for a in set(p):
        for b in set(t):
            pab = sum(1 for x, y in zip(p, t) if x == a and y == b) / n
            if pab:
                pa = sum(1 for x in p if x == a) / n
                pb = sum(1 for y in t if y == b) / n
                mi += pab * math.log(pab / (pa * pb))
    return mi / math.sqrt(hp * ht)


def test_nmi_examples(rng):
    y = np.array([0, 0, 1, 1, 2])
    assert metrics.nmi(y, y) == pytest.approx(1.0)
    assert metrics.nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)
    a, b = rng.integers(0, 3, 20000), rng.integers(0, 3, 20000)
    assert metrics.nmi(a, b) < 0.01
    assert metrics.nmi([0, 0, 0], [0, 1, 1]) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=30))
def test_nmi_oracle(pairs):
    p, t = zip(*pairs)
    if len(set(p)) < 2 or len(set(t)) < 2:
        return
    assert metrics.nmi(p, t) == pytest.approx(_nmi_oracle(p, t), abs=1e-12)


def _rand_oracle(p, t):
    pairs = list(itertools.combinations(range(len(p)), 2))
    agree = sum((p[i] == p[j]) == (t[i] == t[j]) for i, j in pairs)
    return agree / len(pairs)


def test_rand_examples():
    assert metrics.rand_index([0, 1, 1], [0, 1, 1]) == 1.0
    assert metrics.rand_index([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(1 / 3)
    n = 10
    expected = 2 * math.comb(n // 2, 2) / math.comb(n, 2)
    assert metrics.rand_index([0] * n, [0] * 5 + [1] * 5) == pytest.approx(expected)
    with pytest.raises(ValidationError):
        metrics.rand_index([0], [0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=25))
def test_rand_oracle(pairs):
    p, t = zip(*pairs)
    assert metrics.rand_index(p, t) == pytest.approx(_rand_oracle(p, t))


def test_within_class_ratio(rng):
    X = np.array([[0.0, 0.0, 1.0, 1.0]])
    assert metrics.within_class_ratio(X, [0, 0, 1, 1]) == 0.0
    X = np.repeat(rng.standard_normal((2, 3)), 4, axis=1)
    assert metrics.within_class_ratio(X, np.repeat([0, 1, 2], 4)) == pytest.approx(0.0)
    X = rng.standard_normal((2, 4000))
    assert metrics.within_class_ratio(X, rng.integers(0, 3, 4000)) > 0.99


def test_rotation_recovery_score(rng):
    R = random_rotation(5, rng)
    assert metrics.rotation_recovery_score(R, R) == pytest.approx(1.0)
    flipped = R[:, [3, 1, 4, 0, 2]] * np.array([1, -1, -1, 1, -1])
    assert metrics.rotation_recovery_score(flipped, R) == pytest.approx(1.0)
    r = 40
    scores = [metrics.rotation_recovery_score(random_rotation(r, rng), random_rotation(r, rng))
              for _ in range(5)]
    # matched |cos| of random directions stays far below 1 (about 0.3 here)
    assert np.mean(scores) < 0.5
