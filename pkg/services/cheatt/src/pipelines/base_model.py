"""
pipelines/base_model.py
🤖 Abstract Baseline Model - Interface cho classical baselines
"""
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from sklearn.compose import ColumnTransformer
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import OneHotEncoder

from data import TableDataset
from errors import ContractError
from evaluation import calculate_all_metrics

logger = logging.getLogger(__name__)


def dataset_frame(dataset: TableDataset, split: Optional[str] = None) -> pd.DataFrame:
    """
    Model-facing feature frame of one split

    Categorical columns hold vocabulary codes, continuous columns the
    standardized values, in encoder token order.
    """
    index = dataset.splits[split] if split is not None else np.arange(dataset.n_rows)
    data = {}
    for c, col in enumerate(dataset.categorical_columns):
        data[col.name] = dataset.categorical[index, c]
    for c, col in enumerate(dataset.continuous_columns):
        data[col.name] = dataset.continuous[index, c]
    return pd.DataFrame(data, columns=dataset.token_names)


class BaselineModel(ABC):
    """
    Abstract base class cho classical baselines

    Subclasses only choose the estimator; encoding (one-hot categorical
    codes, continuous passthrough) and evaluation are shared.
    """

    def __init__(self, model_type: str, hyperparameters: Dict[str, Any] = None, seed: int = 0):
        """
        Args:
            model_type: Registry name (logistic, random_forest, ...)
            hyperparameters: Estimator keyword arguments
            seed: random_state for stochastic estimators
        """
        self.model_type = model_type
        self.hyperparameters = hyperparameters or {}
        self.seed = seed
        self.pipeline: Optional[Pipeline] = None
        self.task: Optional[str] = None
        self.n_classes = 0
        self.feature_names: List[str] = []
        self.is_trained = False

    @abstractmethod
    def build_estimator(self, task: str):
        """
        Estimator for a task

        Args:
            task: binary | multiclass | regression

        Returns:
            Unfitted scikit-learn compatible estimator
        """
        pass

    def build_pipeline(self, dataset: TableDataset) -> Pipeline:
        logger.info(f"🔧 Building {self.model_type} pipeline...")
        categorical = [c.name for c in dataset.categorical_columns]
        continuous = [c.name for c in dataset.continuous_columns]
        transformers = []
        if categorical:
            transformers.append(('onehot', OneHotEncoder(handle_unknown='ignore'), categorical))
        if continuous:
            transformers.append(('continuous', 'passthrough', continuous))
        steps = [
            ('encode', ColumnTransformer(transformers)),
            ('model', self.build_estimator(dataset.label.task)),
        ]
        logger.info(f"  Pipeline steps: {[name for name, _ in steps]}")
        return Pipeline(steps)

    def fit(self, dataset: TableDataset) -> Dict[str, float]:
        """
        Fit on the train split

        Returns:
            Dict: train-split metrics
        """
        self.task = dataset.label.task
        self.n_classes = dataset.label.n_classes
        self.feature_names = dataset.token_names
        X_train = dataset_frame(dataset, 'train')
        y_train = dataset.labels[dataset.splits['train']]

        logger.info(f"🏋️ Training {self.model_type} baseline on {len(X_train)} rows...")
        self.pipeline = self.build_pipeline(dataset)
        self.pipeline.fit(X_train, y_train)
        self.is_trained = True

        return calculate_all_metrics(self.task, self.predict_scores(X_train), y_train)

    def predict_scores(self, X: pd.DataFrame) -> np.ndarray:
        """
        Class probabilities (N x C) or regression outputs (N,)

        Classes absent from the train split get probability 0.
        """
        if not self.is_trained:
            raise ContractError(f"{self.model_type} baseline chưa được fit!")
        X = X[self.feature_names]
        if self.task == "regression":
            return np.asarray(self.pipeline.predict(X), dtype=np.float64)

        proba = self.pipeline.predict_proba(X)
        classes = np.asarray(self.pipeline.named_steps['model'].classes_, dtype=np.int64)
        scores = np.zeros((len(X), self.n_classes))
        scores[:, classes] = proba
        return scores

    def evaluate(self, dataset: TableDataset, split: str = 'test') -> Dict[str, float]:
        """Metrics on one split"""
        X = dataset_frame(dataset, split)
        labels = dataset.labels[dataset.splits[split]]
        metrics = calculate_all_metrics(self.task, self.predict_scores(X), labels)
        for metric, value in metrics.items():
            logger.info(f"  {self.model_type} {split} {metric.upper()}: {value:.4f}")
        return metrics

    def __repr__(self) -> str:
        status = "Trained" if self.is_trained else "Not Trained"
        return f"{self.model_type.upper()} Baseline ({status})"
