"""
tests/conftest.py
🧪 Shared fixtures; puts src/ on the import path
"""
import sys
from pathlib import Path

import numpy as np
import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from data import SyntheticSpec, generate_synthetic  # noqa: E402
from nn import ModelConfig  # noqa: E402
from training import DataConfig, ExperimentConfig, TrainingConfig  # noqa: E402

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_stochastic(rng: np.random.Generator, n: int) -> np.ndarray:
    """Row-stochastic matrix with strictly positive entries"""
    m = rng.random((n, n)) + 1e-3
    return m / m.sum(axis=1, keepdims=True)


def symmetric_doubly_stochastic(rng: np.random.Generator, n: int, terms: int = 4) -> np.ndarray:
    """Convex mix of symmetrized permutation matrices"""
    weights = rng.random(terms)
    weights /= weights.sum()
    m = np.zeros((n, n))
    for w in weights:
        p = np.eye(n)[rng.permutation(n)]
        m += w * 0.5 * (p + p.T)
    return m


@pytest.fixture(scope="session")
def small_dataset():
    """Binary synthetic table: 4 continuous + 2 categorical columns, 120 rows"""
    spec = SyntheticSpec(n_rows=120, n_continuous=4, n_categorical=2, task="binary")
    return generate_synthetic(spec, seed=3)


@pytest.fixture
def tiny_model_config(small_dataset):
    return ModelConfig(
        embed_dim=8, depth=2, n_heads=2, ffn_hidden=8, head_hidden=8,
        attention_kind="cheatt", basis="chebyshev", order=3, seed=0,
        **small_dataset.model_layout()
    )


@pytest.fixture
def quick_experiment():
    """Few-epoch experiment on a small synthetic table"""
    return ExperimentConfig(
        name="quick",
        data=DataConfig(seed=3, synthetic=SyntheticSpec(n_rows=120, n_continuous=4, n_categorical=2).to_dict()),
        model=ModelConfig(n_continuous=1, embed_dim=8, depth=1, n_heads=2, ffn_hidden=8, head_hidden=8, order=3),
        training=TrainingConfig(finetune_epochs=3, batch_size=32, seeds=[1, 2], log_every=1),
    )
