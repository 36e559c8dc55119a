"""
pipelines/wrappers/sklearn_pkg.py
🌲 Scikit-learn baselines: linear, decision tree, random forest
"""
import logging

from sklearn.ensemble import RandomForestClassifier, RandomForestRegressor
from sklearn.linear_model import LinearRegression, LogisticRegression
from sklearn.tree import DecisionTreeClassifier, DecisionTreeRegressor

from ..base_model import BaselineModel

logger = logging.getLogger(__name__)


class LinearBaseline(BaselineModel):
    """Logistic regression (classification) or least squares (regression)"""

    def __init__(self, hyperparameters: dict = None, seed: int = 0):
        super().__init__('linear', hyperparameters, seed)

    def build_estimator(self, task: str):
        if task == "regression":
            return LinearRegression(**self.hyperparameters)
        params = {'max_iter': 1000, **self.hyperparameters}
        return LogisticRegression(random_state=self.seed, **params)


class DecisionTreeBaseline(BaselineModel):

    def __init__(self, hyperparameters: dict = None, seed: int = 0):
        super().__init__('decision_tree', hyperparameters, seed)

    def build_estimator(self, task: str):
        params = {'max_depth': 6, **self.hyperparameters}
        if task == "regression":
            return DecisionTreeRegressor(random_state=self.seed, **params)
        return DecisionTreeClassifier(random_state=self.seed, **params)


class RandomForestBaseline(BaselineModel):

    def __init__(self, hyperparameters: dict = None, seed: int = 0):
        super().__init__('random_forest', hyperparameters, seed)

    def build_estimator(self, task: str):
        params = {'n_estimators': 200, **self.hyperparameters}
        if task == "regression":
            return RandomForestRegressor(random_state=self.seed, **params)
        return RandomForestClassifier(random_state=self.seed, **params)
