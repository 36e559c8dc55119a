"""
diagnostics/report.py
📋 Per-layer oversmoothing report: JSON document + flat CSV
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from attention import (
    AttentionMap,
    check_contraction,
    empirical_decay_rate,
    pagerank_error_curve,
    power_convergence_curve,
    verify_markov_conditions
)
from autodiff import Tape
from data import TableBatch
from errors import ShapeError
from nn import TabularModel
from polyfilter import spectral_response
from .oversmoothing import attention_spectrum, batch_feature_metrics

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 101
DEFAULT_CURVE_STEPS = 50

# array-valued metrics, in CSV export order
ARRAY_METRICS = (
    'singular_values',
    'attention_eigenvalues',
    'response_on_spectrum',
    'response_on_grid',
)


@dataclass
class LayerMetrics:
    """
    Metrics of one feature map X(layer)

    Layer 0 is the input embedding and carries no attention fields.
    `response_*` is the attention filter's scalar response g(λ) on the
    symmetrized attention spectrum and on the shared uniform grid;
    `high_frequency_ratio` is the feature-space counterpart.
    """

    layer: int
    cosine_similarity: float
    high_frequency_ratio: float
    singular_values: List[float]
    attention_eigenvalues: List[float] = field(default_factory=list)
    response_on_spectrum: List[float] = field(default_factory=list)
    response_on_grid: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'layer': self.layer,
            'cosine_similarity': self.cosine_similarity,
            'high_frequency_ratio': self.high_frequency_ratio,
            **{name: list(getattr(self, name)) for name in ARRAY_METRICS},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LayerMetrics":
        return cls(**data)


@dataclass
class OversmoothingReport:
    """Oversmoothing forensics for one model on one batch"""

    attention_kind: str
    basis: str
    order: int
    lambda_grid: List[float]
    layers: List[LayerMetrics]
    convergence_curve: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'attention_kind': self.attention_kind,
            'basis': self.basis,
            'order': self.order,
            'lambda_grid': list(self.lambda_grid),
            'layers': [layer.to_dict() for layer in self.layers],
            'convergence_curve': list(self.convergence_curve),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OversmoothingReport":
        data = dict(data)
        data['layers'] = [LayerMetrics.from_dict(layer) for layer in data['layers']]
        return cls(**data)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "OversmoothingReport":
        return cls.from_dict(json.loads(text))

    def to_frame(self) -> pd.DataFrame:
        """Long format: columns (layer, metric, index, value)"""
        rows = []
        for layer in self.layers:
            rows.append((layer.layer, 'cosine_similarity', 0, layer.cosine_similarity))
            rows.append((layer.layer, 'high_frequency_ratio', 0, layer.high_frequency_ratio))
            for name in ARRAY_METRICS:
                rows.extend((layer.layer, name, i, v) for i, v in enumerate(getattr(layer, name)))
        rows.extend((-1, 'convergence_curve', i, v) for i, v in enumerate(self.convergence_curve))
        rows.extend((-1, 'lambda_grid', i, v) for i, v in enumerate(self.lambda_grid))
        return pd.DataFrame(rows, columns=['layer', 'metric', 'index', 'value'])

    def save(self, path) -> Path:
        """Write <path> as JSON and the same stem with .csv alongside"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        self.to_frame().to_csv(path.with_suffix('.csv'), index=False)
        logger.info(f"💾 Saved oversmoothing report to {path}")
        return path

    @classmethod
    def load(cls, path) -> "OversmoothingReport":
        return cls.from_json(Path(path).read_text())


def head_values(model: TabularModel, x: np.ndarray, layer: int, head: int) -> np.ndarray:
    """V block of one head: X(layer) · Wv(layer), columns of that head"""
    cfg = model.config
    lo = head * cfg.head_dim
    return x @ model.params[f"layer{layer}.attn.wv"][:, lo:lo + cfg.head_dim]


def _mean_spectrum(maps: Sequence[np.ndarray]) -> np.ndarray:
    """Entrywise mean of descending spectra over heads and batch rows"""
    spectra = []
    for head_maps in maps:
        stacked = head_maps if head_maps.ndim == 3 else head_maps[None]
        spectra.extend(attention_spectrum(AttentionMap(m)) for m in stacked)
    return np.mean(spectra, axis=0)


def layer_report(
    model: TabularModel,
    batch: TableBatch,
    layer_range: Optional[Sequence[int]] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    curve_steps: int = DEFAULT_CURVE_STEPS
) -> OversmoothingReport:
    """
    Forward a batch and aggregate per-layer oversmoothing metrics

    Args:
        model: Trained or untrained model
        batch: Sample rows
        layer_range: Feature-map indices to include (default 0..depth)
        grid_points: Size of the uniform [-1, 1] response grid
        curve_steps: Length of the A^kV convergence curve

    Returns:
        OversmoothingReport
    """
    cfg = model.config
    activations = model.encode(Tape(), batch)
    filters = model.filters()
    grid = np.linspace(-1.0, 1.0, grid_points)

    layers_wanted = list(layer_range) if layer_range is not None else list(range(activations.depth + 1))
    layers: List[LayerMetrics] = []
    curve: List[float] = []

    for idx in layers_wanted:
        metrics = batch_feature_metrics(activations.features[idx])
        entry = LayerMetrics(
            layer=idx,
            cosine_similarity=metrics['cosine_similarity'],
            high_frequency_ratio=metrics['high_frequency_ratio'],
            singular_values=metrics['singular_values'].tolist(),
        )
        if idx >= 1:
            block = idx - 1
            eigenvalues = _mean_spectrum(activations.attention[block])
            entry.attention_eigenvalues = eigenvalues.tolist()
            entry.response_on_spectrum = spectral_response(filters[block], eigenvalues).tolist()
            entry.response_on_grid = spectral_response(filters[block], grid).tolist()

            # first head, first row, on that head's V block
            first_map = activations.attention[block][0]
            first_map = first_map[0] if first_map.ndim == 3 else first_map
            first_input = activations.features[block]
            first_input = first_input[0] if first_input.ndim == 3 else first_input
            v = head_values(model, first_input, block, head=0)
            curve = power_convergence_curve(AttentionMap(first_map), v, curve_steps)
        layers.append(entry)

    logger.info(f"📋 Oversmoothing report over {len(layers)} layer(s) ({cfg.attention_kind})")
    return OversmoothingReport(
        attention_kind=cfg.attention_kind,
        basis=cfg.basis if cfg.attention_kind == "cheatt" else "power",
        order=cfg.order if cfg.attention_kind == "cheatt" else 1,
        lambda_grid=grid.tolist(),
        layers=layers,
        convergence_curve=list(curve),
    )


# ============ ATTENTION CONVERGENCE ============

DEFAULT_PAGERANK_EPS = (0.05, 0.15, 0.5)


@dataclass
class ConvergenceReport:
    """Markov certificate, A^kV curve and PageRank error curves of one attention map"""

    layer: int
    head: int
    row: int
    markov: Dict[str, Any]
    convergence_curve: List[float]
    decay_rate: float
    predicted_rate: float
    pagerank: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'layer': self.layer,
            'head': self.head,
            'row': self.row,
            'markov': dict(self.markov),
            'convergence_curve': list(self.convergence_curve),
            'decay_rate': self.decay_rate,
            'predicted_rate': self.predicted_rate,
            'pagerank': self.pagerank,
        }

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2))
        logger.info(f"💾 Saved convergence report to {path}")
        return path


def attention_convergence_report(
    model: TabularModel,
    batch: TableBatch,
    layer: int = 0,
    head: int = 0,
    row: int = 0,
    steps: int = 200,
    eps_values: Sequence[float] = DEFAULT_PAGERANK_EPS,
    t_max: int = 50
) -> ConvergenceReport:
    """
    Convergence forensics for one attention map of a model

    The map of (layer, head) for batch row `row` is certified against the
    Markov conditions, iterated on that head's V block, and used as the
    transition matrix of damped PageRank for every eps.

    Raises:
        ShapeError: layer/head/row out of range
    """
    cfg = model.config
    if not 0 <= layer < cfg.depth:
        raise ShapeError(f"layer {layer} out of range for depth {cfg.depth}")
    if not 0 <= head < cfg.n_heads:
        raise ShapeError(f"head {head} out of range for {cfg.n_heads} heads")
    if not 0 <= row < len(batch):
        raise ShapeError(f"row {row} out of range for a batch of {len(batch)}")

    activations = model.encode(Tape(), batch.subset(np.array([row])))
    a = AttentionMap(activations.attention[layer][head][0])
    v = head_values(model, activations.features[layer][0], layer, head)

    markov = verify_markov_conditions(a)
    curve = power_convergence_curve(a, v, steps)
    pagerank = {}
    for eps in eps_values:
        errors = pagerank_error_curve(a.matrix, eps, t_max)
        pagerank[str(eps)] = {
            'error_curve': errors,
            'violations': check_contraction(errors, eps),
        }

    report = ConvergenceReport(
        layer=layer,
        head=head,
        row=row,
        markov=markov.to_dict(),
        convergence_curve=curve,
        decay_rate=empirical_decay_rate(curve),
        predicted_rate=1.0 - markov.spectral_gap_estimate,
        pagerank=pagerank,
    )
    logger.info(f"📉 Layer {layer} head {head}: decay {report.decay_rate:.4f} per step "
                f"(1 − gap = {report.predicted_rate:.4f})")
    return report
