"""
diagnostics/oversmoothing.py
🔬 Oversmoothing metrics on feature maps and attention maps
"""
import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Sequence, Tuple

import numpy as np

from attention import AttentionMap
from autodiff import Tape
from data import TableBatch
from errors import ParameterError, UndefinedMetricError
from linalg import DenseMatrix, as_matrix, frobenius_norm, svd, sym_eigen
from nn import ModelConfig, TabularModel, init_params

logger = logging.getLogger(__name__)

SINGULAR_VALUE_THRESHOLD = 0.1


def token_cosine_similarity(x: DenseMatrix) -> float:
    """
    Mean cos(x_i, x_j) over all unordered pairs of nonzero rows

    Zero rows are excluded (and counted in a warning).

    Raises:
        UndefinedMetricError: Fewer than 2 nonzero rows
    """
    x = as_matrix(x, "x")
    norms = np.sqrt(np.sum(x * x, axis=1))
    keep = norms > 0
    excluded = int((~keep).sum())
    if excluded:
        logger.warning(f"⚠️ token_cosine_similarity: excluded {excluded} zero row(s)")
    if keep.sum() < 2:
        raise UndefinedMetricError("cosine similarity needs at least 2 nonzero tokens")

    unit = x[keep] / norms[keep][:, None]
    gram = unit @ unit.T
    upper = np.triu_indices(gram.shape[0], k=1)
    return float(np.clip(gram[upper].mean(), -1.0, 1.0))


def normalized_singular_values(x: DenseMatrix) -> np.ndarray:
    """
    σ_i / σ_1, descending, starting at 1

    Raises:
        UndefinedMetricError: Zero matrix
    """
    _, sigma, _ = svd(x)
    if sigma[0] == 0.0:
        raise UndefinedMetricError("singular values of a zero matrix cannot be normalized")
    return sigma / sigma[0]


def attention_spectrum(a: AttentionMap) -> np.ndarray:
    """Eigenvalues of ½(A + Aᵀ), descending"""
    m = a.matrix
    return sym_eigen(0.5 * (m + m.T)).eigenvalues


def high_frequency_ratio(x: DenseMatrix) -> float:
    """
    ||X − mean_rows(X)||_F / ||X||_F

    0 when every token is identical (pure low-frequency signal).
    """
    x = as_matrix(x, "x")
    total = frobenius_norm(x)
    if total == 0.0:
        raise UndefinedMetricError("high-frequency ratio of a zero matrix is undefined")
    return frobenius_norm(x - x.mean(axis=0, keepdims=True)) / total


def singular_value_cutoff(sv: Sequence[float], threshold: float = SINGULAR_VALUE_THRESHOLD) -> int:
    """First index whose normalized singular value is < threshold (len(sv) if none)"""
    values = np.asarray(sv, dtype=np.float64)
    below = np.flatnonzero(values < threshold)
    return int(below[0]) if below.size else int(values.size)


def batch_feature_metrics(features: np.ndarray) -> Dict[str, object]:
    """
    Batch-averaged metrics of a (B, n, d) or (n, d) feature map

    Singular-value profiles are averaged entrywise over the batch.
    """
    feats = features if features.ndim == 3 else features[None]
    cos, hf, sv = [], [], []
    for x in feats:
        cos.append(token_cosine_similarity(x))
        hf.append(high_frequency_ratio(x))
        sv.append(normalized_singular_values(x))
    return {
        'cosine_similarity': float(np.mean(cos)),
        'high_frequency_ratio': float(np.mean(hf)),
        'singular_values': np.mean(sv, axis=0),
    }


def final_layer_statistics(
    model: TabularModel,
    batch: TableBatch,
    threshold: float = SINGULAR_VALUE_THRESHOLD
) -> Tuple[float, int]:
    """
    (token cosine similarity, singular-value cutoff) of the last feature map

    Both are batch averages; the cutoff is taken on the averaged profile.
    """
    activations = model.encode(Tape(), batch)
    metrics = batch_feature_metrics(activations.features[-1])
    return metrics['cosine_similarity'], singular_value_cutoff(metrics['singular_values'], threshold)


@dataclass
class OversmoothingComparison:
    """
    Final-layer statistics of Vanilla vs CheAtt models, paired by seed

    `trained` tells whether the models went through fine-tuning or were
    compared at their shared initialization.
    """

    seeds: List[int]
    depth: int
    trained: bool = False
    vanilla_cosine: List[float] = field(default_factory=list)
    cheatt_cosine: List[float] = field(default_factory=list)
    vanilla_cutoff: List[int] = field(default_factory=list)
    cheatt_cutoff: List[int] = field(default_factory=list)

    @property
    def median_cosine(self) -> Dict[str, float]:
        return {
            'vanilla': float(np.median(self.vanilla_cosine)),
            'cheatt': float(np.median(self.cheatt_cosine)),
        }

    @property
    def median_cutoff(self) -> Dict[str, float]:
        return {
            'vanilla': float(np.median(self.vanilla_cutoff)),
            'cheatt': float(np.median(self.cheatt_cutoff)),
        }

    def record(self, kind: str, cosine: float, cutoff: int):
        if kind == "vanilla":
            self.vanilla_cosine.append(cosine)
            self.vanilla_cutoff.append(cutoff)
        elif kind == "cheatt":
            self.cheatt_cosine.append(cosine)
            self.cheatt_cutoff.append(cutoff)
        else:
            raise ParameterError(f"unknown attention kind {kind!r}")

    def log_summary(self):
        regime = "trained" if self.trained else "untrained"
        logger.info(
            f"🔬 Oversmoothing at depth {self.depth} ({regime}): median cosine "
            f"vanilla={self.median_cosine['vanilla']:.4f}, cheatt={self.median_cosine['cheatt']:.4f}; "
            f"median cutoff vanilla={self.median_cutoff['vanilla']}, cheatt={self.median_cutoff['cheatt']}"
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data['median_cosine'] = self.median_cosine
        data['median_cutoff'] = self.median_cutoff
        return data


def compare_oversmoothing(
    base_config: ModelConfig,
    batch: TableBatch,
    seeds: Sequence[int],
    threshold: float = SINGULAR_VALUE_THRESHOLD
) -> OversmoothingComparison:
    """
    Run untrained Vanilla and CheAtt encoders with identical parameters

    For each seed both models share every parameter except the CheAtt
    coefficients, which keep their default init. At init the default
    filter passes the token mean with gain Σ α_k P_k(1) (about 2 for the
    Chebyshev default) against 1 for AV. The trained comparison is
    training.oversmoothing_direction.

    Returns:
        OversmoothingComparison with per-seed values and medians
    """
    result = OversmoothingComparison(seeds=list(seeds), depth=base_config.depth)
    for seed in seeds:
        cheatt_cfg = replace(base_config, attention_kind="cheatt", seed=seed)
        vanilla_cfg = replace(base_config, attention_kind="vanilla", seed=seed)
        params = init_params(cheatt_cfg)
        for cfg in (vanilla_cfg, cheatt_cfg):
            cosine, cutoff = final_layer_statistics(TabularModel(cfg, params), batch, threshold)
            result.record(cfg.attention_kind, cosine, cutoff)

    result.log_summary()
    return result
