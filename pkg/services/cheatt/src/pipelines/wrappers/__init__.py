"""
Baseline Wrappers
"""
from .sklearn_pkg import DecisionTreeBaseline, LinearBaseline, RandomForestBaseline
from .xgboost_pkg import XGBoostBaseline

__all__ = ['DecisionTreeBaseline', 'LinearBaseline', 'RandomForestBaseline', 'XGBoostBaseline']
