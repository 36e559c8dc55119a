"""
storage/checkpoint.py
💾 Model checkpoints as JSON documents
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config import Config
from errors import ConfigError, DataError
from nn import ModelConfig, TabularModel

logger = logging.getLogger(__name__)


def make_json_safe(obj):
    """Recursively turn numpy scalars/arrays and tuples into JSON types"""
    if isinstance(obj, dict):
        return {k: make_json_safe(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    elif isinstance(obj, np.ndarray):
        return make_json_safe(obj.tolist())
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    else:
        return obj


def checkpoint_to_dict(model: TabularModel, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Checkpoint document

    Parameters are stored as {name: {shape, values}} with `values` the
    flat row-major array; JSON floats use the shortest round-trip repr,
    so load -> save reproduces every value exactly.
    """
    return {
        'format_version': Config.CHECKPOINT_FORMAT_VERSION,
        'config': make_json_safe(model.config.to_dict()),
        'params': {
            name: {
                'shape': list(value.shape),
                'values': [float(x) for x in np.asarray(value, dtype=np.float64).reshape(-1)],
            }
            for name, value in sorted(model.params.items())
        },
        'metadata': make_json_safe(metadata or {}),
    }


def checkpoint_from_dict(document: Dict[str, Any]) -> Tuple[TabularModel, Dict[str, Any]]:
    """
    Rebuild a model from a checkpoint document

    Raises:
        ConfigError: Unsupported format version or invalid model config
        DataError: Malformed entries, or parameter names that differ from the model's
    """
    version = document.get('format_version')
    if version != Config.CHECKPOINT_FORMAT_VERSION:
        raise ConfigError(f"unsupported checkpoint format_version {version!r}")

    config = ModelConfig.from_dict(document['config'])
    params: Dict[str, np.ndarray] = {}
    for name, entry in document.get('params', {}).items():
        shape = tuple(int(s) for s in entry['shape'])
        values = np.asarray(entry['values'], dtype=np.float64)
        if values.size != int(np.prod(shape, dtype=np.int64)):
            raise DataError(f"parameter {name!r}: {values.size} values do not fill shape {shape}")
        params[name] = values.reshape(shape)

    expected = TabularModel(config).params
    missing = set(expected) - set(params)
    if missing:
        raise DataError(f"checkpoint is missing parameters: {sorted(missing)}")
    unexpected = set(params) - set(expected)
    if unexpected:
        raise DataError(f"checkpoint has unexpected parameters: {sorted(unexpected)}")
    for name, value in expected.items():
        if params[name].shape != value.shape:
            raise DataError(f"parameter {name!r} has shape {params[name].shape}, expected {value.shape}")

    return TabularModel(config, params), dict(document.get('metadata', {}))


def save_checkpoint(model: TabularModel, path, metadata: Optional[Dict[str, Any]] = None) -> Path:
    """
    Save model checkpoint

    Args:
        model: Model to persist
        path: Target .json file
        metadata: Extra JSON-serializable info (metrics, seed, ...)

    Returns:
        Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(checkpoint_to_dict(model, metadata), indent=1))
    logger.info(f"💾 Saved checkpoint ({model.n_params} values) to {path}")
    return path


def load_checkpoint(path) -> Tuple[TabularModel, Dict[str, Any]]:
    """
    Load model checkpoint

    Returns:
        (model, metadata)

    Raises:
        DataError: Missing or unparseable file
    """
    path = Path(path)
    logger.info(f"📥 Loading checkpoint {path}...")
    try:
        document = json.loads(path.read_text())
    except OSError as e:
        raise DataError(f"cannot read checkpoint {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"checkpoint {path} is not valid JSON: {e.msg}", line=e.lineno) from e

    model, metadata = checkpoint_from_dict(document)
    logger.info(f"  ✅ Loaded {model.config.attention_kind} model, depth {model.config.depth}")
    return model, metadata
