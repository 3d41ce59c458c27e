import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from labelspace import metrics
from labelspace.metrics import HIGHER_IS_BETTER, MEASURES, MetricValue, evaluate

import oracles

Y = np.array([[1, 0], [0, 1]], dtype=bool)
Z = np.array([[1, 1], [0, 0]], dtype=bool)


def test_worked_examples():
    assert metrics.micro_f1(Y, Z) == 0.5
    assert metrics.macro_f1(Y, Z) == 0.5
    assert metrics.hamming_loss(Y, Z) == 0.5
    assert metrics.subset_accuracy(Y, Z) == 0.0
    assert metrics.subset_accuracy([[1, 1], [0, 0]], [[1, 0], [0, 0]]) == 0.5
    assert metrics.jaccard([[1, 1], [0, 1]], [[1, 0], [0, 1]]) == 0.75


def test_perfect_and_complement():
    s = evaluate(Y, Y)
    assert s == {"micro_f1": 1.0, "macro_f1": 1.0, "subset_accuracy": 1.0, "jaccard": 1.0, "hamming_loss": 0.0}
    assert metrics.subset_accuracy(Y, ~Y) == 0.0
    assert metrics.hamming_loss(Y, ~Y) == 1.0


def test_degenerate_conventions():
    E = np.zeros((3, 2), dtype=bool)
    assert metrics.micro_f1(E, E) == 1.0
    assert metrics.jaccard(E, E) == 1.0
    Y2 = np.array([[1, 0], [0, 0]], dtype=bool)
    assert metrics.macro_f1(Y2, Y2.copy()) == 1.0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        evaluate(Y, np.zeros((2, 3), dtype=bool))


def test_measure_metadata():
    assert MEASURES == ("micro_f1", "macro_f1", "subset_accuracy", "jaccard", "hamming_loss")
    assert not HIGHER_IS_BETTER["hamming_loss"]
    assert all(HIGHER_IS_BETTER[m] for m in MEASURES[:4])
    assert MetricValue("jaccard", 0.3).higher_is_better


def test_matches_oracle():
    rng = np.random.default_rng(0)
    for _ in range(100):
        A = rng.random((20, 8)) < rng.uniform(0.05, 0.6)
        B = rng.random((20, 8)) < rng.uniform(0.05, 0.6)
        assert evaluate(A, B) == oracles.brute_metrics(A.tolist(), B.tolist())


pairs = st.integers(1, 12).flatmap(
    lambda n: st.integers(1, 6).flatmap(
        lambda q: st.tuples(arrays(bool, (n, q)), arrays(bool, (n, q)), st.randoms(use_true_random=False))
    )
)


@settings(max_examples=150, deadline=None)
@given(pairs)
def test_properties(case):
    A, B, rnd = case
    s = evaluate(A, B)
    assert all(0.0 <= v <= 1.0 for v in s.values())
    rows = list(range(A.shape[0]))
    cols = list(range(A.shape[1]))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    assert evaluate(A[rows], B[rows]) == pytest.approx(s, abs=1e-15)
    assert evaluate(A[:, cols], B[:, cols]) == pytest.approx(s, abs=1e-15)
    assert metrics.hamming_loss(A, B) + metrics.hamming_loss(A, ~B) == pytest.approx(1.0, abs=1e-15)
    assert s["subset_accuracy"] <= s["jaccard"] + 1e-15
    assert s["jaccard"] <= 1 - s["hamming_loss"] + 1e-15
