"""
Pipelines Module - Classical baselines với Sklearn Pipeline
"""
from .base_model import BaselineModel, dataset_frame
from .factory import BaselineFactory, run_baseline
from .wrappers import DecisionTreeBaseline, LinearBaseline, RandomForestBaseline, XGBoostBaseline

__all__ = [
    'BaselineFactory',
    'BaselineModel',
    'DecisionTreeBaseline',
    'LinearBaseline',
    'RandomForestBaseline',
    'XGBoostBaseline',
    'dataset_frame',
    'run_baseline'
]
