"""
training/sweep.py
🧪 Seeded sweeps: axis tables (mean ± std), timing overhead, oversmoothing direction
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import Config
from data import TableDataset
from diagnostics import SINGULAR_VALUE_THRESHOLD, OversmoothingComparison, final_layer_statistics
from errors import ConfigError
from evaluation import aggregate_metrics, primary_metric_name
from storage import ExperimentResult
from .experiment import ExperimentConfig
from .trainer import ExperimentRunner, run_experiment

logger = logging.getLogger(__name__)

AXES = ("order", "basis", "attention_kind")
AXIS_ALIASES = {"order_k": "order", "k": "order"}


def default_axis_values(axis: str) -> List[Any]:
    axis = AXIS_ALIASES.get(axis, axis)
    if axis == "order":
        return list(Config.SWEEP_ORDERS)
    if axis == "basis":
        return list(Config.SWEEP_BASES)
    if axis == "attention_kind":
        return ["vanilla", "cheatt"]
    raise ConfigError(f"❌ unknown sweep axis {axis!r} (expected one of {AXES})")


def _cell_config(config: ExperimentConfig, axis: str, value: Any) -> ExperimentConfig:
    if axis == "order":
        return config.with_model(order=int(value), attention_kind="cheatt")
    if axis == "basis":
        return config.with_model(basis=str(value), basis_params={}, attention_kind="cheatt")
    return config.with_model(attention_kind=str(value))


def format_score(mean: float, std: float, digits: int = 3) -> str:
    """'0.951 ± 0.012'; 'failed' when no run of the cell completed"""
    if np.isnan(mean):
        return "failed"
    return f"{mean:.{digits}f} ± {std:.{digits}f}"


@dataclass
class SweepResult:
    """Per-cell runs and the aggregated table"""

    axis: str
    values: List[Any]
    seeds: List[int]
    runs: Dict[str, List[ExperimentResult]] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.table.to_csv(path, index=False)
        logger.info(f"💾 Saved sweep table to {path}")
        return path


def _cell_row(axis: str, value: Any, metric: str, runs: List[ExperimentResult]) -> Dict[str, Any]:
    done = [r for r in runs if r.succeeded]
    row: Dict[str, Any] = {'axis': axis, 'value': value, 'n_runs': len(runs), 'n_failed': len(runs) - len(done)}

    aggregated = aggregate_metrics([{metric: r.primary_value} for r in done])
    for suffix in ("mean", "std", "min", "max"):
        row[f"{metric}_{suffix}"] = aggregated.get(f"{metric}_{suffix}", float('nan'))
    row['score'] = format_score(row[f"{metric}_mean"], row[f"{metric}_std"])

    epoch_times = [r.timing.mean_epoch_seconds for r in done if r.timing.finetune_epoch_seconds]
    row['epoch_seconds_mean'] = float(np.mean(epoch_times)) if epoch_times else float('nan')
    return row


def sweep(
    config: ExperimentConfig,
    axis: str,
    values: Optional[Sequence[Any]] = None,
    seeds: Optional[Sequence[int]] = None,
    output_dir=None,
    dataset: Optional[TableDataset] = None
) -> SweepResult:
    """
    Run every (axis value, seed) cell sequentially

    A failing run is logged and counted in `n_failed`; the sweep moves on.

    Args:
        config: Base experiment configuration
        axis: order (alias order_k) | basis | attention_kind
        values: Axis values (defaults from Config)
        seeds: Seed list (defaults to config.training.seeds)
        output_dir: Writes per-run outputs under <axis>=<value>/seed<s>/ and sweep.csv
        dataset: Pre-loaded dataset shared by all cells

    Returns:
        SweepResult with one table row per axis value
    """
    axis = AXIS_ALIASES.get(axis, axis)
    if axis not in AXES:
        raise ConfigError(f"❌ unknown sweep axis {axis!r} (expected one of {AXES})")
    values = list(values) if values is not None else default_axis_values(axis)
    seeds = list(seeds) if seeds is not None else list(config.training.seeds)
    if not values or not seeds:
        raise ConfigError("❌ sweep needs at least one axis value and one seed")
    config.validate()
    output_dir = Path(output_dir) if output_dir is not None else None

    logger.info("=" * 70)
    logger.info(f"🧪 SWEEP over {axis} = {values} × seeds {seeds}")
    logger.info("=" * 70)

    dataset = dataset if dataset is not None else config.data.load()
    metric = primary_metric_name(dataset.label.task)
    result = SweepResult(axis=axis, values=values, seeds=seeds)
    rows = []

    for value in values:
        cell = _cell_config(config, axis, value)
        runs: List[ExperimentResult] = []
        for seed in seeds:
            run_dir = output_dir / f"{axis}={value}" / f"seed{seed}" if output_dir else None
            runner = None
            try:
                runner = ExperimentRunner(cell, seed=seed, output_dir=run_dir, dataset=dataset)
                runs.append(runner.run())
            except Exception as e:
                logger.error(f"❌ {axis}={value}, seed {seed} failed: {e}")
                if runner is not None:
                    runs.append(runner.result)
                else:
                    runs.append(ExperimentResult(
                        name=cell.name, seed=seed, config=cell.to_dict(),
                        status="failed", error=f"{type(e).__name__}: {e}",
                    ))
        result.runs[str(value)] = runs
        row = _cell_row(axis, value, metric, runs)
        logger.info(f"  {axis}={value}: {row['score']} ({row['n_failed']} failed)")
        rows.append(row)

    result.table = pd.DataFrame(rows)
    if output_dir is not None:
        result.save(output_dir / "sweep.csv")
    return result


def timing_overhead(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    dataset: Optional[TableDataset] = None
) -> Dict[str, float]:
    """
    Per-epoch fine-tuning time of CheAtt relative to Vanilla

    Both runs share the configuration, data and seed; only the
    attention kind differs.

    Returns:
        dict: vanilla_epoch_seconds, cheatt_epoch_seconds, ratio
    """
    dataset = dataset if dataset is not None else config.data.load()
    times = {}
    for kind in ("vanilla", "cheatt"):
        result = run_experiment(config.with_model(attention_kind=kind), seed=seed, dataset=dataset)
        times[kind] = result.timing.mean_epoch_seconds

    ratio = times['cheatt'] / times['vanilla'] if times['vanilla'] > 0 else float('nan')
    logger.info(f"⏱️ Epoch time vanilla={times['vanilla']:.4f}s, cheatt={times['cheatt']:.4f}s, "
                f"ratio={ratio:.2f}×")
    return {
        'vanilla_epoch_seconds': times['vanilla'],
        'cheatt_epoch_seconds': times['cheatt'],
        'ratio': ratio,
    }


def oversmoothing_direction(
    config: ExperimentConfig,
    depth: int = 8,
    seeds: Optional[Sequence[int]] = None,
    dataset: Optional[TableDataset] = None,
    threshold: float = SINGULAR_VALUE_THRESHOLD
) -> OversmoothingComparison:
    """
    Final-layer oversmoothing of trained Vanilla vs CheAtt encoders

    For every seed both attention kinds go through the full pipeline of
    `config` at `depth` (same init apart from the filter coefficients,
    same minibatch order), then the final feature map of the test split
    is measured.

    Args:
        config: Experiment configuration (the golden config for acceptance)
        depth: Encoder depth for both models
        seeds: Run seeds (defaults to config.training.seeds)
        dataset: Pre-loaded dataset
        threshold: Normalized singular-value cutoff

    Returns:
        OversmoothingComparison with trained=True
    """
    dataset = dataset if dataset is not None else config.data.load()
    seeds = [int(s) for s in (seeds if seeds is not None else config.training.seeds)]
    test_batch = dataset.batch('test')
    result = OversmoothingComparison(seeds=seeds, depth=depth, trained=True)

    for seed in seeds:
        for kind in ("vanilla", "cheatt"):
            logger.info(f"🔬 Training {kind} at depth {depth} (seed {seed})")
            runner = ExperimentRunner(config.with_model(attention_kind=kind, depth=depth), seed=seed, dataset=dataset)
            runner.run()
            cosine, cutoff = final_layer_statistics(runner.model, test_batch, threshold)
            result.record(kind, cosine, cutoff)

    result.log_summary()
    return result
