"""
tests/test_metrics.py
"""
import itertools

import numpy as np
import pytest

from errors import UndefinedMetricError
from evaluation import (
    aggregate_metrics,
    auroc,
    calculate_all_metrics,
    calculate_mae,
    calculate_rmse,
    primary_metric_name,
    r_squared,
)


def pairwise_auroc(scores, labels):
    """Enumerate every positive/negative pair"""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p, n in itertools.product(pos, neg):
        total += 1.0 if p > n else 0.5 if p == n else 0.0
    return total / (len(pos) * len(neg))


class TestAuroc:

    @pytest.mark.parametrize("labels, expected", [
        ([1, 1, 0, 0], 1.0),
        ([1, 0, 1, 0], 0.75),
        ([0, 0, 1, 1], 0.0),
    ])
    def test_examples(self, labels, expected):
        assert auroc([0.9, 0.8, 0.2, 0.1], labels) == expected

    def test_all_ties(self):
        assert auroc([0.3] * 6, [0, 1, 0, 1, 1, 0]) == 0.5

    def test_single_class(self):
        with pytest.raises(UndefinedMetricError):
            auroc([0.1, 0.2], [1, 1])

    def test_matches_pair_enumeration(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            labels = rng.integers(0, 2, size=n)
            labels[0], labels[1] = 0, 1
            # coarse scores force ties
            scores = np.round(rng.random(n), int(rng.integers(1, 3)))
            assert abs(auroc(scores, labels) - pairwise_auroc(scores, labels)) <= 1e-12

    def test_monotone_invariance(self, rng):
        for _ in range(100):
            n = int(rng.integers(4, 40))
            labels = rng.integers(0, 2, size=n)
            labels[:2] = [0, 1]
            scores = rng.standard_normal(n)
            transformed = np.exp(scores) + scores ** 3
            assert auroc(transformed, labels) == auroc(scores, labels)

    def test_probability_matrix_binary(self):
        probs = np.array([[0.1, 0.9], [0.8, 0.2], [0.4, 0.6]])
        assert auroc(probs, [1, 0, 0]) == 1.0

    def test_multiclass_one_vs_rest(self):
        probs = np.eye(3)[[0, 1, 2, 0, 1, 2]] * 0.7 + 0.1
        assert auroc(probs, [0, 1, 2, 0, 1, 2]) == 1.0

    def test_multiclass_skips_absent_class(self):
        probs = np.array([[0.6, 0.3, 0.1], [0.2, 0.7, 0.1], [0.5, 0.4, 0.1]])
        assert auroc(probs, [0, 1, 0]) == 1.0

    def test_one_dimensional_needs_binary_labels(self):
        with pytest.raises(UndefinedMetricError):
            auroc([0.1, 0.5, 0.9], [0, 1, 2])


class TestRegressionMetrics:

    def test_perfect(self):
        assert r_squared([1.0, 2.0, 4.0], [1.0, 2.0, 4.0]) == 1.0

    def test_mean_prediction(self):
        assert r_squared([7 / 3] * 3, [1.0, 2.0, 4.0]) == pytest.approx(0.0, abs=1e-15)

    def test_negative(self):
        targets = np.array([1.0, 2.0, 3.0])
        preds = np.full(3, 100.0)
        expected = 1.0 - np.sum((targets - 100.0) ** 2) / 2.0
        assert r_squared(preds, targets) == pytest.approx(expected)
        assert r_squared(preds, targets) < -100

    def test_undefined(self):
        with pytest.raises(UndefinedMetricError):
            r_squared([1.0, 2.0], [3.0, 3.0])
        with pytest.raises(UndefinedMetricError):
            r_squared([1.0], [3.0])

    def test_errors(self):
        assert calculate_rmse(np.array([0.0, 0.0]), np.array([3.0, 4.0])) == pytest.approx(np.sqrt(12.5))
        assert calculate_mae(np.array([0.0, 0.0]), np.array([3.0, -4.0])) == 3.5


class TestMetricSets:

    def test_primary_names(self):
        assert primary_metric_name("binary") == "auroc"
        assert primary_metric_name("multiclass") == "auroc"
        assert primary_metric_name("regression") == "r2"

    def test_classification_set(self):
        metrics = calculate_all_metrics("binary", np.array([[0.2, 0.8], [0.9, 0.1]]), np.array([1, 0]))
        assert metrics == {'auroc': 1.0, 'accuracy': 1.0}

    def test_regression_set(self):
        metrics = calculate_all_metrics("regression", np.array([1.0, 2.0]), np.array([1.0, 2.0]))
        assert set(metrics) == {'r2', 'rmse', 'mae'}

    def test_aggregate(self):
        aggregated = aggregate_metrics([{'auroc': 0.9}, {'auroc': 0.7}])
        assert aggregated['auroc_mean'] == pytest.approx(0.8)
        assert aggregated['auroc_std'] == pytest.approx(0.1)
        assert aggregated['auroc_min'] == 0.7 and aggregated['auroc_max'] == 0.9
        assert aggregate_metrics([]) == {}
