"""
pipelines/factory.py
🏭 Baseline Factory
"""
import logging
from typing import Any, Dict, List

from data import TableDataset
from errors import ConfigError
from .base_model import BaselineModel
from .wrappers.sklearn_pkg import DecisionTreeBaseline, LinearBaseline, RandomForestBaseline
from .wrappers.xgboost_pkg import XGBoostBaseline

logger = logging.getLogger(__name__)


class BaselineFactory:
    """
    Factory để tạo classical baselines
    """

    _baselines = {
        'linear': LinearBaseline,
        'decision_tree': DecisionTreeBaseline,
        'random_forest': RandomForestBaseline,
        'xgboost': XGBoostBaseline,
    }

    @classmethod
    def create(
        cls,
        model_type: str,
        hyperparameters: Dict[str, Any] = None,
        seed: int = 0
    ) -> BaselineModel:
        """
        Tạo baseline

        Args:
            model_type: Registry name
            hyperparameters: Estimator keyword arguments
            seed: random_state

        Returns:
            Unfitted BaselineModel

        Raises:
            ConfigError: If model type not supported
        """
        model_type = model_type.lower()

        if model_type not in cls._baselines:
            available = ', '.join(cls._baselines.keys())
            raise ConfigError(
                f"Unknown baseline: {model_type}. "
                f"Available: {available}"
            )

        logger.info(f"🏭 Creating {model_type} baseline...")
        return cls._baselines[model_type](hyperparameters=hyperparameters, seed=seed)

    @classmethod
    def register_baseline(cls, name: str, baseline_class: type):
        """Register new baseline"""
        cls._baselines[name] = baseline_class
        logger.info(f"✅ Registered baseline: {name}")

    @classmethod
    def get_available_baselines(cls) -> List[str]:
        """Get available baselines"""
        return list(cls._baselines.keys())


def run_baseline(
    model_type: str,
    dataset: TableDataset,
    hyperparameters: Dict[str, Any] = None,
    seed: int = 0
) -> Dict[str, Any]:
    """
    Fit a baseline on the train split and score the test split

    Returns:
        dict: model_type, seed, train_metrics, test_metrics
    """
    baseline = BaselineFactory.create(model_type, hyperparameters, seed)
    train_metrics = baseline.fit(dataset)
    test_metrics = baseline.evaluate(dataset, 'test')
    return {
        'model_type': baseline.model_type,
        'seed': seed,
        'train_metrics': train_metrics,
        'test_metrics': test_metrics,
    }
