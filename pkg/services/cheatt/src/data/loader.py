"""
data/loader.py
📥 Load / save tabular datasets from CSV
"""
import csv
import logging
import re
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd

from config import Config
from errors import DataError
from .dataset import SPLIT_COLUMN, TableDataset, build_dataset
from .splitter import DataSplitter

logger = logging.getLogger(__name__)

_LINE_PATTERN = re.compile(r"line (\d+)")


def _check_rectangular(path: Path) -> int:
    """
    Every record has the header's field count

    Returns:
        Number of header fields
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise DataError(f"{path} is empty (no header)", line=1)
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"expected {len(header)} fields, saw {len(row)}",
                    line=reader.line_num
                )
    return len(header)


def load_csv(
    path,
    label: Optional[str] = None,
    task: Optional[str] = None,
    schema_hints: Optional[Dict[str, str]] = None,
    split_column: str = SPLIT_COLUMN,
    seed: int = 0,
    categorical_threshold: Optional[int] = None
) -> TableDataset:
    """
    Load a CSV file (header line, comma separated, UTF-8)

    Args:
        path: CSV file path
        label: Label column (defaults to the last column)
        task: binary | multiclass | regression (inferred when None)
        schema_hints: Column name -> 'continuous' | 'categorical'
        split_column: Column holding explicit train/valid/test labels, if present
        seed: Shuffle seed for the 70/10/20 split
        categorical_threshold: Override Config.CATEGORICAL_THRESHOLD

    Returns:
        TableDataset

    Raises:
        DataError: Unreadable file, ragged rows, empty dataset
    """
    path = Path(path)
    logger.info(f"📥 Loading CSV {path}...")

    try:
        _check_rectangular(path)
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[""])
    except DataError:
        raise
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path} is empty", line=1) from e
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        raise DataError(f"cannot parse {path}: {e}", line=int(match.group(1)) if match else None) from e
    except UnicodeDecodeError as e:
        raise DataError(f"{path} is not valid UTF-8: {e}") from e
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e

    if len(frame) == 0:
        raise DataError(f"{path} has a header but no rows", line=2)

    if split_column in frame.columns:
        splits = DataSplitter.from_column(frame[split_column])
        frame = frame.drop(columns=[split_column])
    else:
        splits = DataSplitter.random_split(
            len(frame), seed,
            Config.TRAIN_RATIO, Config.VAL_RATIO, Config.TEST_RATIO
        )

    label = label or frame.columns[-1]
    threshold = categorical_threshold if categorical_threshold is not None else Config.CATEGORICAL_THRESHOLD

    dataset = build_dataset(
        frame,
        label=label,
        splits=splits,
        task=task,
        categorical_threshold=threshold,
        schema_hints=schema_hints,
        name=path.stem,
    )

    info = dataset.get_data_info()
    logger.info(f"✅ Loaded {info['total_rows']} rows ({info['task']})")
    logger.info(f"  Categorical: {len(info['categorical'])}, Continuous: {len(info['continuous'])}")
    missing = frame.isna().sum()
    if missing.any():
        logger.warning("  ⚠️ Missing values detected:")
        for col, count in missing[missing > 0].items():
            logger.warning(f"    {col}: {count} ({count / len(frame) * 100:.1f}%)")

    return dataset


def save_csv(dataset: TableDataset, path) -> Path:
    """
    Write raw cells plus the split column

    load_csv on the written file reproduces the dataset.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    out = dataset.frame.copy()
    split = np.empty(len(out), dtype=object)
    for name, index in dataset.splits.items():
        split[index] = name
    out[SPLIT_COLUMN] = split
    out.to_csv(path, index=False)

    logger.info(f"💾 Saved {len(out)} rows to {path}")
    return path
