"""
Storage Module - Checkpoints and result records
"""
from .checkpoint import (
    checkpoint_from_dict,
    checkpoint_to_dict,
    load_checkpoint,
    make_json_safe,
    save_checkpoint
)
from .metadata import STATUS_COMPLETED, STATUS_FAILED, ExperimentResult, RunTiming

__all__ = [
    'STATUS_COMPLETED',
    'STATUS_FAILED',
    'ExperimentResult',
    'RunTiming',
    'checkpoint_from_dict',
    'checkpoint_to_dict',
    'load_checkpoint',
    'make_json_safe',
    'save_checkpoint'
]
