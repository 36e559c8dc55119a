"""
data/dataset.py
🗂️ Typed tabular dataset: column specs, encoded arrays, splits
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from sklearn.preprocessing import StandardScaler

from errors import DataError

logger = logging.getLogger(__name__)

# Reserved categorical ids; observed train levels start at FIRST_LEVEL
UNK = 0
MISSING = 1
MASK = 2
FIRST_LEVEL = 3

SPLITS = ("train", "valid", "test")
SPLIT_COLUMN = "__split__"


@dataclass
class ColumnSpec:
    """One feature column after type inference"""

    name: str
    kind: str  # continuous | categorical
    levels: List[str] = field(default_factory=list)
    mean: float = 0.0
    scale: float = 1.0
    constant: bool = False

    @property
    def vocab_size(self) -> int:
        return FIRST_LEVEL + len(self.levels)

    def encode(self, values: pd.Series) -> np.ndarray:
        """Categorical codes: MISSING for empty cells, UNK for unseen levels"""
        lookup = {level: FIRST_LEVEL + i for i, level in enumerate(self.levels)}
        codes = values.map(lambda v: MISSING if pd.isna(v) else lookup.get(str(v), UNK))
        return codes.to_numpy(dtype=np.int64)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LabelSpec:
    """Label column + task; classes for classification, train stats for regression"""

    name: str
    task: str  # binary | multiclass | regression
    classes: List[str] = field(default_factory=list)
    mean: float = 0.0
    scale: float = 1.0

    @property
    def n_classes(self) -> int:
        return len(self.classes) if self.task != "regression" else 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TableBatch:
    """Model input: categorical codes, standardized continuous values, labels"""

    categorical: np.ndarray  # (B, n_cat) int64
    continuous: np.ndarray   # (B, n_cont) float64
    labels: np.ndarray       # (B,) int64 class ids or float64 targets

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def subset(self, index: np.ndarray) -> "TableBatch":
        return TableBatch(self.categorical[index], self.continuous[index], self.labels[index])

    def masked(self, mask: np.ndarray) -> "TableBatch":
        """
        Replace masked cells (mask is B x n_tokens, categorical first)

        Masked categorical cells become MASK, masked continuous cells 0.
        """
        n_cat = self.categorical.shape[1]
        cat = np.where(mask[:, :n_cat], MASK, self.categorical)
        cont = np.where(mask[:, n_cat:], 0.0, self.continuous)
        return TableBatch(cat.astype(np.int64), cont, self.labels)


@dataclass
class TableDataset:
    """
    Columns, encoded values and split index sets

    `frame` keeps the raw cells (features then label) so the table can be
    written back unchanged; every model-facing array is derived from it
    with train-split statistics only.
    """

    name: str
    frame: pd.DataFrame
    columns: List[ColumnSpec]
    label: LabelSpec
    splits: Dict[str, np.ndarray]
    categorical: np.ndarray
    continuous: np.ndarray
    labels: np.ndarray
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def categorical_columns(self) -> List[ColumnSpec]:
        return [c for c in self.columns if c.kind == "categorical"]

    @property
    def continuous_columns(self) -> List[ColumnSpec]:
        return [c for c in self.columns if c.kind == "continuous"]

    @property
    def token_names(self) -> List[str]:
        """Encoder token order: categorical columns, then continuous"""
        return [c.name for c in self.categorical_columns] + [c.name for c in self.continuous_columns]

    @property
    def n_rows(self) -> int:
        return int(self.labels.shape[0])

    def batch(self, split: Optional[str] = None) -> TableBatch:
        """All rows of one split (all rows when split is None)"""
        if split is None:
            index = np.arange(self.n_rows)
        elif split in self.splits:
            index = self.splits[split]
        else:
            raise DataError(f"unknown split {split!r} (expected one of {SPLITS})")
        return TableBatch(self.categorical[index], self.continuous[index], self.labels[index])

    def model_layout(self) -> Dict[str, Any]:
        """Column layout keys understood by ModelConfig"""
        return {
            'categorical_cardinalities': [c.vocab_size for c in self.categorical_columns],
            'n_continuous': len(self.continuous_columns),
            'task': self.label.task,
            'n_classes': self.label.n_classes if self.label.task != "regression" else 2,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, TableDataset):
            return NotImplemented
        return (
            [c.to_dict() for c in self.columns] == [c.to_dict() for c in other.columns]
            and self.label.to_dict() == other.label.to_dict()
            and all(np.array_equal(self.splits[s], other.splits[s]) for s in SPLITS)
            and np.array_equal(self.categorical, other.categorical)
            and np.array_equal(self.continuous, other.continuous)
            and np.array_equal(self.labels, other.labels)
        )

    def get_data_info(self) -> dict:
        """
        Get summary info về dataset

        Returns:
            dict: Summary statistics
        """
        return {
            'name': self.name,
            'total_rows': self.n_rows,
            'categorical': [c.name for c in self.categorical_columns],
            'continuous': [c.name for c in self.continuous_columns],
            'constant_columns': [c.name for c in self.columns if c.constant],
            'label': self.label.name,
            'task': self.label.task,
            'splits': {s: int(len(self.splits[s])) for s in SPLITS},
        }


# ============ CONSTRUCTION ============

def _numeric(values: pd.Series) -> Optional[pd.Series]:
    """
    Float view of a column, or None if any present cell is non-numeric

    Cells go through float() so a decimal string lands on the nearest
    double (pd.to_numeric's fast parser can be off by one ulp).
    """
    present = values.notna().to_numpy()
    parsed = np.full(len(values), np.nan)
    try:
        parsed[present] = [float(cell) for cell in values[present]]
    except (TypeError, ValueError):
        return None
    if np.isnan(parsed[present]).any():
        return None
    return pd.Series(parsed, index=values.index, name=values.name)


def _sorted_levels(values: pd.Series) -> List[str]:
    levels = values.dropna().astype(str).unique().tolist()
    as_numbers = pd.to_numeric(pd.Series(levels, dtype=object), errors="coerce")
    if len(levels) and as_numbers.notna().all():
        return [lvl for _, lvl in sorted(zip(as_numbers.tolist(), levels))]
    return sorted(levels)


def infer_column_kind(
    values: pd.Series,
    train_index: np.ndarray,
    threshold: int,
    hint: Optional[str] = None
) -> str:
    """
    Column typing rule

    non-numeric -> categorical; numeric with <= threshold distinct train
    values -> categorical; otherwise continuous. A schema hint wins.
    """
    if hint is not None:
        if hint not in ("continuous", "categorical"):
            raise DataError(f"schema hint for {values.name!r} must be continuous|categorical, got {hint!r}")
        if hint == "continuous" and _numeric(values) is None:
            raise DataError(f"column {values.name!r} hinted continuous but holds non-numeric values")
        return hint
    parsed = _numeric(values)
    if parsed is None:
        return "categorical"
    distinct = parsed.iloc[train_index].dropna().nunique()
    return "categorical" if distinct <= threshold else "continuous"


def _infer_task(values: pd.Series, threshold: int) -> str:
    parsed = _numeric(values)
    distinct = values.nunique()
    if parsed is None or distinct <= threshold:
        return "binary" if distinct == 2 else "multiclass"
    return "regression"


def build_dataset(
    frame: pd.DataFrame,
    label: str,
    splits: Dict[str, np.ndarray],
    task: Optional[str] = None,
    categorical_threshold: int = 20,
    schema_hints: Optional[Dict[str, str]] = None,
    name: str = "table",
    extras: Optional[Dict[str, Any]] = None
) -> TableDataset:
    """
    Type, impute, encode and standardize a raw frame

    Args:
        frame: Raw cells (features + label column)
        label: Label column name
        splits: train/valid/test row indices
        task: binary | multiclass | regression (inferred when None)
        categorical_threshold: Max distinct train values for a numeric categorical
        schema_hints: Column name -> forced kind
        name: Dataset name
        extras: Side information (e.g. oracle scores of synthetic data)

    Returns:
        TableDataset
    """
    if len(frame) == 0:
        raise DataError("dataset has no rows", line=2)
    if label not in frame.columns:
        raise DataError(f"label column {label!r} not found. Available: {list(frame.columns)[:10]}")
    hints = schema_hints or {}
    unknown_hints = set(hints) - set(frame.columns)
    if unknown_hints:
        raise DataError(f"schema hints name unknown columns: {sorted(unknown_hints)}")

    train_index = splits["train"]
    if len(train_index) == 0:
        raise DataError("train split is empty")

    feature_names = [c for c in frame.columns if c != label]
    if not feature_names:
        raise DataError("dataset has no feature columns")

    # ---- label ----
    raw_label = frame[label]
    missing_label = np.flatnonzero(raw_label.isna().to_numpy())
    if missing_label.size:
        raise DataError("label is missing", line=int(missing_label[0]) + 2)
    task = task or _infer_task(raw_label, categorical_threshold)

    if task == "regression":
        parsed = _numeric(raw_label)
        if parsed is None:
            raise DataError(f"regression label {label!r} holds non-numeric values")
        y = parsed.to_numpy()
        mean = float(y[train_index].mean())
        std = float(y[train_index].std())
        scale = std if std > 0 else 1.0
        label_spec = LabelSpec(name=label, task=task, mean=mean, scale=scale)
        labels = (y - mean) / scale
    elif task in ("binary", "multiclass"):
        classes = _sorted_levels(raw_label)
        if task == "binary" and len(classes) != 2:
            raise DataError(f"binary task needs exactly 2 label values, found {len(classes)}")
        if len(classes) < 2:
            raise DataError("classification label has a single class")
        lookup = {c: i for i, c in enumerate(classes)}
        labels = raw_label.astype(str).map(lookup).to_numpy(dtype=np.int64)
        label_spec = LabelSpec(name=label, task=task, classes=classes)
    else:
        raise DataError(f"unknown task {task!r}")

    # ---- features ----
    columns: List[ColumnSpec] = []
    cat_codes, cont_values = [], []
    for col in feature_names:
        values = frame[col]
        kind = infer_column_kind(values, train_index, categorical_threshold, hints.get(col))
        if kind == "categorical":
            spec = ColumnSpec(name=col, kind=kind, levels=_sorted_levels(values.iloc[train_index]))
            cat_codes.append(spec.encode(values))
        else:
            parsed = _numeric(values).to_numpy()
            train_values = parsed[train_index]
            fill = float(np.nanmean(train_values)) if np.isfinite(train_values).any() else 0.0
            parsed = np.where(np.isnan(parsed), fill, parsed)
            spec = ColumnSpec(name=col, kind=kind, mean=fill)
            cont_values.append(parsed)
        columns.append(spec)

    n = len(frame)
    categorical = np.stack(cat_codes, axis=1) if cat_codes else np.zeros((n, 0), dtype=np.int64)

    if cont_values:
        raw_cont = np.stack(cont_values, axis=1)
        scaler = StandardScaler().fit(raw_cont[train_index])
        continuous = scaler.transform(raw_cont)
        for spec, var, scale, mean in zip(
            (c for c in columns if c.kind == "continuous"), scaler.var_, scaler.scale_, scaler.mean_
        ):
            spec.scale = float(scale)
            spec.mean = float(mean)
            spec.constant = bool(var == 0.0)
            if spec.constant:
                logger.warning(f"  ⚠️ Column {spec.name!r} is constant on the train split")
    else:
        continuous = np.zeros((n, 0))

    return TableDataset(
        name=name,
        frame=frame.reset_index(drop=True),
        columns=columns,
        label=label_spec,
        splits={s: np.asarray(splits[s], dtype=np.int64) for s in SPLITS},
        categorical=categorical.astype(np.int64),
        continuous=np.ascontiguousarray(continuous, dtype=np.float64),
        labels=labels,
        extras=dict(extras or {}),
    )
