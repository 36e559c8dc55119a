"""
data/splitter.py
✂️ Train/Valid/Test Split cho tabular rows
"""
import logging
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from errors import ConfigError, DataError

logger = logging.getLogger(__name__)

SPLIT_ALIASES = {
    'train': 'train',
    'valid': 'valid',
    'val': 'valid',
    'validation': 'valid',
    'test': 'test',
}


class DataSplitter:
    """Split row indices into disjoint train/valid/test sets"""

    @staticmethod
    def random_split(
        n: int,
        seed: int,
        train_ratio: float = 0.7,
        val_ratio: float = 0.1,
        test_ratio: float = 0.2
    ) -> Dict[str, np.ndarray]:
        """
        Seeded shuffle split

        Args:
            n: Number of rows
            seed: Shuffle seed
            train_ratio: Training set ratio
            val_ratio: Validation set ratio
            test_ratio: Test set ratio (gets the remainder)

        Returns:
            dict: split name -> sorted row indices
        """
        total = train_ratio + val_ratio + test_ratio
        if abs(total - 1.0) > 0.01:
            raise ConfigError(f"Ratios must sum to 1.0, got {total}")

        perm = np.random.default_rng(seed).permutation(n)
        train_size = int(round(n * train_ratio))
        val_size = int(round(n * val_ratio))

        splits = {
            'train': np.sort(perm[:train_size]),
            'valid': np.sort(perm[train_size:train_size + val_size]),
            'test': np.sort(perm[train_size + val_size:]),
        }
        DataSplitter._log(splits)
        return splits

    @staticmethod
    def from_column(values: pd.Series) -> Dict[str, np.ndarray]:
        """
        Split given by an explicit column (train / valid|val / test)

        Raises:
            DataError: Unknown split label, with its line number
        """
        labels = values.astype(str).str.strip().str.lower()
        mapped = labels.map(SPLIT_ALIASES)
        bad = np.flatnonzero(mapped.isna().to_numpy())
        if bad.size:
            row = int(bad[0])
            raise DataError(f"unknown split label {values.iloc[row]!r}", line=row + 2)

        splits = {
            name: np.flatnonzero((mapped == name).to_numpy())
            for name in ('train', 'valid', 'test')
        }
        DataSplitter._log(splits)
        return splits

    @staticmethod
    def check_disjoint(splits: Dict[str, Sequence[int]], n: int) -> bool:
        """Split sets are disjoint and cover all n rows"""
        merged = np.concatenate([np.asarray(v) for v in splits.values()])
        return merged.size == n and np.array_equal(np.sort(merged), np.arange(n))

    @staticmethod
    def _log(splits: Dict[str, np.ndarray]):
        logger.info(f"  Train: {len(splits['train'])} samples")
        logger.info(f"  Valid: {len(splits['valid'])} samples")
        logger.info(f"  Test: {len(splits['test'])} samples")
