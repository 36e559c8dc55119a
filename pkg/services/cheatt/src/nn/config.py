"""
nn/config.py
⚙️ Model configuration for the tabular Transformer encoder
"""
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

from errors import ConfigError
from polyfilter import DEFAULT_ORDER, BasisFactory

ATTENTION_KINDS = ("vanilla", "cheatt")
TASKS = ("binary", "multiclass", "regression")


@dataclass
class ModelConfig:
    """
    Architecture + column layout of one encoder

    Tokens are the categorical columns followed by the continuous ones,
    so n_tokens = len(categorical_cardinalities) + n_continuous.
    """

    # Column layout
    categorical_cardinalities: List[int] = field(default_factory=list)
    n_continuous: int = 0
    task: str = "binary"
    n_classes: int = 2

    # Encoder
    embed_dim: int = 8
    depth: int = 2
    n_heads: int = 2
    ffn_hidden: int = 16
    attention_kind: str = "cheatt"

    # Polynomial filter template
    basis: str = "chebyshev"
    basis_params: Dict[str, float] = field(default_factory=dict)
    order: int = DEFAULT_ORDER

    # Prediction head
    head_hidden: int = 16

    seed: int = 0

    @property
    def n_tokens(self) -> int:
        return len(self.categorical_cardinalities) + self.n_continuous

    @property
    def n_categorical(self) -> int:
        return len(self.categorical_cardinalities)

    @property
    def head_dim(self) -> int:
        return self.embed_dim // self.n_heads

    @property
    def n_outputs(self) -> int:
        """Logits for classification, one value for regression"""
        return 1 if self.task == "regression" else self.n_classes

    def validate(self) -> bool:
        """
        Validate configuration

        Raises:
            ConfigError: Listing every problem found
        """
        errors = []

        if self.n_tokens < 1:
            errors.append("❌ model needs at least one column")
        for name in ("embed_dim", "n_heads", "ffn_hidden", "head_hidden"):
            if getattr(self, name) < 1:
                errors.append(f"❌ {name} must be positive (got {getattr(self, name)})")
        if self.depth < 0:
            errors.append(f"❌ depth must be >= 0 (got {self.depth})")
        if self.n_heads >= 1 and self.embed_dim % self.n_heads != 0:
            errors.append(f"❌ embed_dim {self.embed_dim} not divisible by n_heads {self.n_heads}")
        if self.attention_kind not in ATTENTION_KINDS:
            errors.append(f"❌ attention_kind must be one of {ATTENTION_KINDS} (got {self.attention_kind})")
        if self.task not in TASKS:
            errors.append(f"❌ task must be one of {TASKS} (got {self.task})")
        if self.task == "binary" and self.n_classes != 2:
            errors.append(f"❌ binary task needs n_classes = 2 (got {self.n_classes})")
        if self.task == "multiclass" and self.n_classes < 2:
            errors.append(f"❌ multiclass task needs n_classes >= 2 (got {self.n_classes})")
        if not BasisFactory.basis_exists(self.basis):
            errors.append(f"❌ unknown basis {self.basis} (available: {BasisFactory.get_available_bases()})")
        if not (0 <= self.order <= 32):
            errors.append(f"❌ order must be in [0, 32] (got {self.order})")
        if any(c < 4 for c in self.categorical_cardinalities):
            errors.append("❌ categorical vocabularies must hold the 3 reserved ids plus >= 1 level")

        if errors:
            raise ConfigError("\n".join(errors))
        return True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"❌ unknown model config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)
