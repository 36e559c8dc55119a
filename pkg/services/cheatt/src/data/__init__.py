"""
Data Module - CSV ingestion, synthetic tables, splits
"""
from .dataset import (
    MASK,
    MISSING,
    SPLIT_COLUMN,
    UNK,
    ColumnSpec,
    LabelSpec,
    TableBatch,
    TableDataset,
    build_dataset,
    infer_column_kind
)
from .loader import load_csv, save_csv
from .splitter import DataSplitter
from .synthetic import SyntheticSpec, generate_synthetic

__all__ = [
    'MASK',
    'MISSING',
    'SPLIT_COLUMN',
    'UNK',
    'ColumnSpec',
    'DataSplitter',
    'LabelSpec',
    'SyntheticSpec',
    'TableBatch',
    'TableDataset',
    'build_dataset',
    'generate_synthetic',
    'infer_column_kind',
    'load_csv',
    'save_csv'
]
