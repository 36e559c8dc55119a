"""
data/synthetic.py
🧪 Synthetic tables with a known labelling rule
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd

from config import Config
from errors import ConfigError, DataError
from .dataset import TableDataset, build_dataset
from .splitter import DataSplitter

logger = logging.getLogger(__name__)

# Weights of the three informative columns
INFORMATIVE_WEIGHTS = (2.0, -1.5, 1.0)
INTERACTION_WEIGHT = 0.5
LABEL_COLUMN = "label"


@dataclass
class SyntheticSpec:
    """
    Generator settings

    The informative columns are the first three columns in token order
    restricted to what exists: continuous columns c0, c1, c2 first, then
    categorical columns k0, k1, ... mapped to evenly spaced effects in
    [-1, 1] by level index.

    binary:     y = 1[score + noise·Logistic > 0]
    multiclass: y = argmax_c(score_c + noise·Gumbel), score_c = w_c · informative
    regression: y = score + 0.5·x0·x1 + noise·N(0, 1)

    with score = 2.0·x0 − 1.5·x1 + 1.0·x2; `extras['oracle_score']` holds
    the noiseless score(s).
    """

    n_rows: int = 500
    n_continuous: int = 6
    n_categorical: int = 2
    task: str = "binary"
    n_classes: int = 3
    levels: int = 5
    noise: float = 0.25

    def validate(self) -> bool:
        errors = []
        if self.n_continuous < 0 or self.n_categorical < 0:
            errors.append("❌ column counts must be >= 0")
        if self.n_continuous + self.n_categorical < len(INFORMATIVE_WEIGHTS):
            errors.append(f"❌ need at least {len(INFORMATIVE_WEIGHTS)} columns for the informative rule")
        if self.task not in ("binary", "multiclass", "regression"):
            errors.append(f"❌ unknown task {self.task!r}")
        if self.task == "multiclass" and self.n_classes < 3:
            errors.append("❌ multiclass spec needs n_classes >= 3")
        if self.levels < 2:
            errors.append("❌ categorical columns need >= 2 levels")
        if self.noise < 0:
            errors.append("❌ noise must be >= 0")
        if errors:
            raise ConfigError("\n".join(errors))
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SyntheticSpec":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"❌ unknown synthetic spec keys: {sorted(unknown)}")
        return cls(**data)


def generate_synthetic(spec: SyntheticSpec, seed: int) -> TableDataset:
    """
    Draw a table from the generator documented on SyntheticSpec

    Args:
        spec: Generator settings
        seed: RNG seed (also seeds the split shuffle)

    Returns:
        TableDataset with extras['oracle_score'] and extras['informative']

    Raises:
        DataError: n_rows < 1
        ConfigError: Invalid spec
    """
    if spec.n_rows < 1:
        raise DataError(f"synthetic dataset needs n_rows >= 1, got {spec.n_rows}")
    spec.validate()

    rng = np.random.default_rng(seed)
    n = spec.n_rows

    data: Dict[str, Any] = {}
    effects = []
    names = []
    for i in range(spec.n_continuous):
        x = rng.standard_normal(n)
        data[f"c{i}"] = x
        effects.append(x)
        names.append(f"c{i}")
    half = (spec.levels - 1) / 2.0
    for i in range(spec.n_categorical):
        idx = rng.integers(0, spec.levels, size=n)
        data[f"k{i}"] = np.array([f"v{j}" for j in idx], dtype=object)
        effects.append((idx - half) / half)
        names.append(f"k{i}")

    informative = np.stack(effects[:len(INFORMATIVE_WEIGHTS)], axis=1)
    score = informative @ np.array(INFORMATIVE_WEIGHTS)

    if spec.task == "binary":
        noise = rng.logistic(size=n) * spec.noise
        labels = (score + noise > 0).astype(np.int64)
        oracle = score
    elif spec.task == "multiclass":
        class_weights = rng.standard_normal((len(INFORMATIVE_WEIGHTS), spec.n_classes)) * 2.0
        oracle = informative @ class_weights
        noise = rng.gumbel(size=(n, spec.n_classes)) * spec.noise
        labels = np.argmax(oracle + noise, axis=1).astype(np.int64)
    else:
        oracle = score + INTERACTION_WEIGHT * informative[:, 0] * informative[:, 1]
        labels = oracle + spec.noise * rng.standard_normal(n)

    data[LABEL_COLUMN] = labels
    frame = pd.DataFrame(data)

    splits = DataSplitter.random_split(n, seed, Config.TRAIN_RATIO, Config.VAL_RATIO, Config.TEST_RATIO)
    dataset = build_dataset(
        frame,
        label=LABEL_COLUMN,
        splits=splits,
        task=spec.task,
        categorical_threshold=Config.CATEGORICAL_THRESHOLD,
        name=f"synthetic_{spec.task}_{seed}",
        extras={
            'oracle_score': oracle,
            'informative': names[:len(INFORMATIVE_WEIGHTS)],
            'spec': spec.to_dict(),
            'seed': seed,
        },
    )
    logger.info(f"🧪 Generated synthetic {spec.task} table: {n} rows x {len(names)} columns (seed {seed})")
    return dataset
