"""
pipelines/wrappers/xgboost_pkg.py
🤖 XGBoost baseline (Sklearn Pipeline)
"""
import logging

from xgboost import XGBClassifier, XGBRegressor

from ..base_model import BaselineModel

logger = logging.getLogger(__name__)

DEFAULT_XGB_PARAMS = {
    'n_estimators': 200,
    'max_depth': 4,
    'learning_rate': 0.1,
    'n_jobs': 1,
}


class XGBoostBaseline(BaselineModel):
    """
    Gradient-boosted trees

    Pipeline:
    1. ColumnTransformer - one-hot categorical codes, passthrough continuous
    2. XGBClassifier / XGBRegressor
    """

    def __init__(self, hyperparameters: dict = None, seed: int = 0):
        super().__init__('xgboost', hyperparameters, seed)

    def build_estimator(self, task: str):
        params = {**DEFAULT_XGB_PARAMS, **self.hyperparameters}
        if task == "regression":
            return XGBRegressor(random_state=self.seed, **params)
        return XGBClassifier(random_state=self.seed, **params)
