"""
evaluation/metrics.py
📈 Evaluation Metrics
"""
import logging
from typing import Dict, List

import numpy as np
import pandas as pd
from sklearn.metrics import accuracy_score, mean_absolute_error, mean_squared_error

from errors import UndefinedMetricError

logger = logging.getLogger(__name__)


def _binary_auroc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann–Whitney U / (P·N) with average ranks for ties"""
    positive = labels == 1
    n_pos = int(positive.sum())
    n_neg = int(labels.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError(
            f"AUROC needs both classes (got {n_pos} positive, {n_neg} negative)"
        )
    ranks = pd.Series(scores).rank(method="average").to_numpy()
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auroc(scores, labels) -> float:
    """
    Area under the ROC curve as a rank statistic

    (#concordant pos/neg pairs + ½·#tied pairs) / #pairs. For a 2-D score
    matrix (N x C) the binary case reads column 1 and the multiclass case
    averages one-vs-rest AUROC over classes that have both positives and
    negatives.

    Args:
        scores: (N,) scores or (N, C) class scores
        labels: (N,) binary labels or class ids

    Returns:
        float in [0, 1]

    Raises:
        UndefinedMetricError: Single-class labels
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(np.int64)

    if scores.ndim == 1:
        if not np.isin(labels, (0, 1)).all():
            raise UndefinedMetricError("1-D scores need binary 0/1 labels")
        return _binary_auroc(scores, labels)

    if scores.shape[1] == 2:
        return _binary_auroc(scores[:, 1], labels)

    per_class = []
    for c in range(scores.shape[1]):
        target = (labels == c).astype(np.int64)
        if target.all() or not target.any():
            logger.warning(f"⚠️ AUROC: class {c} has no positives or no negatives, skipped")
            continue
        per_class.append(_binary_auroc(scores[:, c], target))
    if not per_class:
        raise UndefinedMetricError("no class has both positives and negatives")
    return float(np.mean(per_class))


def r_squared(preds, targets) -> float:
    """
    1 − SS_res / SS_tot (may be negative)

    Raises:
        UndefinedMetricError: Fewer than 2 targets or zero target variance
    """
    preds = np.asarray(preds, dtype=np.float64).reshape(-1)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if targets.size < 2:
        raise UndefinedMetricError(f"R² needs at least 2 targets, got {targets.size}")
    ss_tot = float(np.sum((targets - targets.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError("R² is undefined for zero-variance targets")
    ss_res = float(np.sum((targets - preds) ** 2))
    return 1.0 - ss_res / ss_tot


def calculate_rmse(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Root Mean Square Error"""
    return float(np.sqrt(mean_squared_error(y_true, y_pred)))


def calculate_mae(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Mean Absolute Error"""
    return float(mean_absolute_error(y_true, y_pred))


def primary_metric_name(task: str) -> str:
    return "r2" if task == "regression" else "auroc"


def calculate_all_metrics(task: str, scores: np.ndarray, labels: np.ndarray) -> Dict[str, float]:
    """
    Calculate tất cả metrics cho một task

    Args:
        task: binary | multiclass | regression
        scores: Class probabilities (N x C) or regression outputs (N,)
        labels: Class ids or regression targets

    Returns:
        dict: auroc + accuracy, or r2 + rmse + mae
    """
    if task == "regression":
        return {
            'r2': r_squared(scores, labels),
            'rmse': calculate_rmse(labels, scores),
            'mae': calculate_mae(labels, scores),
        }
    return {
        'auroc': auroc(scores, labels),
        'accuracy': float(accuracy_score(labels, np.argmax(scores, axis=1))),
    }


def aggregate_metrics(run_metrics: List[Dict[str, float]]) -> Dict[str, float]:
    """
    Aggregate metrics from several runs

    Args:
        run_metrics: List of metric dicts, one per run

    Returns:
        Dict: <metric>_mean, _std (population), _min, _max for each metric
    """
    aggregated = {}
    if not run_metrics:
        return aggregated

    for metric_name in run_metrics[0].keys():
        values = [run[metric_name] for run in run_metrics]

        aggregated[f'{metric_name}_mean'] = float(np.mean(values))
        aggregated[f'{metric_name}_std'] = float(np.std(values))
        aggregated[f'{metric_name}_min'] = float(np.min(values))
        aggregated[f'{metric_name}_max'] = float(np.max(values))

    return aggregated
