"""
training/experiment.py
⚙️ Experiment configuration: data, model, training sections
"""
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from config import Config
from data import SPLIT_COLUMN, SyntheticSpec, TableDataset, generate_synthetic, load_csv
from errors import ConfigError
from nn import ModelConfig

logger = logging.getLogger(__name__)

GOLDEN_DATA_SEED = 7

# Column layout keys are filled from the dataset at run time
LAYOUT_KEYS = ('categorical_cardinalities', 'n_continuous', 'task', 'n_classes')


def _reject_unknown(section: str, cls, data: Mapping[str, Any]):
    unknown = set(data) - {f.name for f in fields(cls)}
    if unknown:
        raise ConfigError(f"❌ unknown {section} config keys: {sorted(unknown)}")


@dataclass
class DataConfig:
    """Dataset source: a CSV path, or the synthetic generator when path is None"""

    path: Optional[str] = None
    label: Optional[str] = None
    task: Optional[str] = None
    schema_hints: Dict[str, str] = field(default_factory=dict)
    split_column: str = SPLIT_COLUMN
    categorical_threshold: Optional[int] = None
    seed: int = GOLDEN_DATA_SEED
    synthetic: Dict[str, Any] = field(default_factory=lambda: SyntheticSpec().to_dict())

    def validate(self) -> bool:
        if self.path is None:
            SyntheticSpec.from_dict(self.synthetic).validate()
        if self.categorical_threshold is not None and self.categorical_threshold < 1:
            raise ConfigError(f"❌ categorical_threshold must be >= 1 (got {self.categorical_threshold})")
        return True

    def load(self) -> TableDataset:
        """Read the CSV or draw the synthetic table"""
        if self.path is None:
            return generate_synthetic(SyntheticSpec.from_dict(self.synthetic), self.seed)
        return load_csv(
            self.path,
            label=self.label,
            task=self.task,
            schema_hints=self.schema_hints or None,
            split_column=self.split_column,
            seed=self.seed,
            categorical_threshold=self.categorical_threshold,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DataConfig':
        _reject_unknown("data", cls, data)
        data = dict(data)
        if 'synthetic' in data:
            merged = SyntheticSpec().to_dict()
            merged.update(data['synthetic'])
            data['synthetic'] = SyntheticSpec.from_dict(merged).to_dict()
        return cls(**data)


@dataclass
class TrainingConfig:
    """Optimization schedule for pretraining and fine-tuning"""

    pretrain_epochs: int = 0
    finetune_epochs: int = 200
    batch_size: int = 64
    lr: float = 1e-3
    weight_decay: float = 0.0
    mask_probability: float = Config.MASK_PROBABILITY
    lambda_ce: float = 1.0
    patience: int = Config.EARLY_STOPPING_PATIENCE
    seeds: List[int] = field(default_factory=lambda: list(Config.DEFAULT_SEEDS))
    report_rows: int = 64
    log_every: int = 10

    def validate(self) -> bool:
        """
        Validate schedule

        Raises:
            ConfigError: Listing every problem found
        """
        errors = []
        if self.pretrain_epochs < 0 or self.finetune_epochs < 0:
            errors.append("❌ epoch counts must be >= 0")
        if self.batch_size < 1:
            errors.append(f"❌ batch_size must be positive (got {self.batch_size})")
        if self.lr <= 0:
            errors.append(f"❌ lr must be positive (got {self.lr})")
        if self.weight_decay < 0:
            errors.append(f"❌ weight_decay must be >= 0 (got {self.weight_decay})")
        if not 0.0 <= self.mask_probability <= 1.0:
            errors.append(f"❌ mask_probability must be in [0, 1] (got {self.mask_probability})")
        if self.lambda_ce < 0:
            errors.append(f"❌ lambda_ce must be >= 0 (got {self.lambda_ce})")
        if self.patience < 1:
            errors.append(f"❌ patience must be positive (got {self.patience})")
        if not self.seeds:
            errors.append("❌ seed list is empty")
        if self.report_rows < 1:
            errors.append(f"❌ report_rows must be positive (got {self.report_rows})")
        if errors:
            raise ConfigError("\n".join(errors))
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainingConfig':
        _reject_unknown("training", cls, data)
        return cls(**data)


@dataclass
class ExperimentConfig:
    """
    Full experiment: data source + model architecture + training schedule

    The model section's column-layout keys are overwritten from the
    dataset when the experiment runs, and its seed from the run seed.
    """

    name: str = "cheatt"
    data: DataConfig = field(default_factory=DataConfig)
    model: ModelConfig = field(default_factory=lambda: ModelConfig(n_continuous=1))
    training: TrainingConfig = field(default_factory=TrainingConfig)

    def validate(self) -> bool:
        self.data.validate()
        self.training.validate()
        self.model.validate()
        return True

    def model_for(self, dataset: TableDataset, seed: int) -> ModelConfig:
        """Model config with the dataset's column layout and the run seed"""
        return replace(self.model, seed=seed, **dataset.model_layout())

    def with_model(self, **changes) -> 'ExperimentConfig':
        return replace(self, model=replace(self.model, **changes))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'data': self.data.to_dict(),
            'model': self.model.to_dict(),
            'training': self.training.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        unknown = set(data) - {'name', 'data', 'model', 'training'}
        if unknown:
            raise ConfigError(f"❌ unknown experiment config sections: {sorted(unknown)}")
        base = cls()
        model_data = base.model.to_dict()
        model_data.update(data.get('model', {}))
        return cls(
            name=data.get('name', base.name),
            data=DataConfig.from_dict(data.get('data', {})),
            model=ModelConfig.from_dict(model_data),
            training=TrainingConfig.from_dict(data.get('training', {})),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_file(cls, path) -> 'ExperimentConfig':
        """
        Load a JSON config file

        Raises:
            ConfigError: Unreadable file, invalid JSON, unknown keys
        """
        path = Path(path)
        try:
            document = json.loads(path.read_text())
        except OSError as e:
            raise ConfigError(f"❌ cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"❌ config {path} line {e.lineno}: {e.msg}") from e
        if not isinstance(document, dict):
            raise ConfigError(f"❌ config {path} must hold a JSON object")
        logger.info(f"📄 Loaded experiment config {path}")
        return cls.from_dict(document)

    def apply_overrides(self, overrides: Mapping[str, Any]) -> 'ExperimentConfig':
        """
        Return a copy with dotted-key overrides applied

        Keys look like 'training.lr' or 'data.synthetic.noise'; string
        values are parsed as JSON when possible ('10', 'true', '[1, 2]').
        """
        document = self.to_dict()
        for key, raw in overrides.items():
            parts = key.split('.')
            if not all(parts):
                raise ConfigError(f"❌ malformed override key {key!r}")
            target = document
            for part in parts[:-1]:
                if not isinstance(target.get(part), dict):
                    raise ConfigError(f"❌ override {key!r} does not name a config section")
                target = target[part]
            target[parts[-1]] = parse_override_value(raw)
        return ExperimentConfig.from_dict(document)


def parse_override_value(raw: Any) -> Any:
    """JSON literal if it parses, otherwise the raw string"""
    if not isinstance(raw, str):
        return raw
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def golden_config() -> ExperimentConfig:
    """
    Pinned end-to-end configuration

    Synthetic binary table (500 rows, 6 continuous + 2 categorical
    columns, data seed 7), depth-4 CheAtt encoder with a Chebyshev
    filter of order 5, 200 fine-tuning epochs.
    """
    return ExperimentConfig(
        name="golden",
        data=DataConfig(seed=GOLDEN_DATA_SEED),
        model=ModelConfig(
            n_continuous=1,
            embed_dim=8,
            depth=4,
            n_heads=2,
            ffn_hidden=16,
            attention_kind="cheatt",
            basis="chebyshev",
            order=5,
            head_hidden=16,
        ),
        training=TrainingConfig(finetune_epochs=200, batch_size=64, lr=1e-3, seeds=[GOLDEN_DATA_SEED]),
    )
