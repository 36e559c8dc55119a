"""
storage/metadata.py
📋 Experiment result records
"""
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .checkpoint import make_json_safe

logger = logging.getLogger(__name__)

STATUS_COMPLETED = "completed"
STATUS_FAILED = "failed"


@dataclass
class RunTiming:
    """Wall-clock measurements; excluded from determinism comparisons"""

    started_at: str = ""
    completed_at: str = ""
    duration_seconds: float = 0.0
    pretrain_epoch_seconds: List[float] = field(default_factory=list)
    finetune_epoch_seconds: List[float] = field(default_factory=list)
    inference_seconds_per_1000: Optional[float] = None

    @property
    def mean_epoch_seconds(self) -> float:
        """Mean fine-tune epoch time (nan before any epoch ran)"""
        if not self.finetune_epoch_seconds:
            return float('nan')
        return float(np.mean(self.finetune_epoch_seconds))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'RunTiming':
        return cls(**data)


@dataclass
class ExperimentResult:
    """
    Outcome of one run_experiment call

    A failed run keeps whatever was produced before the failure, with
    status 'failed' and the error text.
    """

    name: str
    seed: int
    config: Dict[str, Any]
    status: str = STATUS_COMPLETED
    task: str = ""
    primary_metric: str = ""
    metrics: Dict[str, float] = field(default_factory=dict)
    history: Dict[str, List[float]] = field(default_factory=dict)
    best_epoch: Optional[int] = None
    stopped_epoch: Optional[int] = None
    split_sizes: Dict[str, int] = field(default_factory=dict)
    coefficient_profile: Dict[str, List[float]] = field(default_factory=dict)
    oversmoothing: Optional[Dict[str, Any]] = None
    timing: RunTiming = field(default_factory=RunTiming)
    error: Optional[str] = None

    @property
    def primary_value(self) -> float:
        return float(self.metrics.get(self.primary_metric, float('nan')))

    @property
    def succeeded(self) -> bool:
        return self.status == STATUS_COMPLETED

    def to_dict(self) -> dict:
        data = asdict(self)
        data['timing'] = self.timing.to_dict()
        return make_json_safe(data)

    def deterministic_dict(self) -> dict:
        """Everything except the timing section"""
        data = self.to_dict()
        data.pop('timing')
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentResult':
        data = dict(data)
        timing = RunTiming.from_dict(data.pop('timing', {}))
        return cls(timing=timing, **data)

    def to_json(self, indent: int = 2) -> str:
        """Convert to JSON string"""
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, json_str: str) -> 'ExperimentResult':
        """Create from JSON string"""
        return cls.from_dict(json.loads(json_str))

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        logger.info(f"💾 Saved {self.status} result to {path}")
        return path

    @classmethod
    def load(cls, path) -> 'ExperimentResult':
        return cls.from_json(Path(path).read_text())
