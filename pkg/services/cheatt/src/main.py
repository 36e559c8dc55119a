"""
main.py
🏁 Main Entry Point cho CheAtt experiment CLI
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from config import Config
from data import SyntheticSpec, generate_synthetic, save_csv
from diagnostics import attention_convergence_report, layer_report
from errors import CheAttError, ConfigError, ContractError, exit_code_for
from nn import TabularModel, gradient_audit
from pipelines import BaselineFactory, run_baseline
from storage import load_checkpoint, make_json_safe
from training import ExperimentConfig, golden_config, run_experiment, sweep, timing_overhead

logger = logging.getLogger(__name__)

GOLDEN_TOLERANCE = 0.02


# ============ ARGUMENTS ============

def _add_config_args(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON experiment config (sections: data, model, training)")
    parser.add_argument("--golden", action="store_true", help="Start from the pinned golden config")
    parser.add_argument("--data", help="CSV dataset (overrides data.path)")
    parser.add_argument("--label", help="Label column (overrides data.label)")
    parser.add_argument("--seed", type=int, help="Run seed")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="Override any config key, e.g. --set model.order=10 (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cheatt",
        description="Chebyshev polynomial attention for tabular Transformers: experiments and diagnostics"
    )
    parser.add_argument("--log-level", default=None, help="DEBUG | INFO | WARNING | ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Write a synthetic dataset as CSV")
    synth.add_argument("--out", required=True, help="Output CSV path")
    synth.add_argument("--rows", type=int, default=500)
    synth.add_argument("--continuous", type=int, default=6)
    synth.add_argument("--categorical", type=int, default=2)
    synth.add_argument("--task", default="binary", choices=["binary", "multiclass", "regression"])
    synth.add_argument("--classes", type=int, default=3)
    synth.add_argument("--levels", type=int, default=5)
    synth.add_argument("--noise", type=float, default=0.25)
    synth.add_argument("--seed", type=int, default=7)

    train = sub.add_parser("train", help="Run one experiment")
    _add_config_args(train)
    train.add_argument("--output-dir", help="Directory for result/checkpoint/report")
    train.add_argument("--pin-golden", metavar="PATH", help="Write the achieved test metric as a golden record")

    sw = sub.add_parser("sweep", help="Sweep one axis over seeds")
    _add_config_args(sw)
    sw.add_argument("--axis", required=True, help="order | basis | attention_kind")
    sw.add_argument("--values", help="Comma-separated axis values (defaults per axis)")
    sw.add_argument("--seeds", help="Comma-separated seeds (defaults to training.seeds)")
    sw.add_argument("--output-dir", help="Directory for per-run outputs and sweep.csv")
    sw.add_argument("--timing", action="store_true", help="Also report the CheAtt/Vanilla epoch-time ratio")

    diag = sub.add_parser("diagnose", help="Oversmoothing report for a checkpoint")
    _add_config_args(diag)
    diag.add_argument("--checkpoint", required=True)
    diag.add_argument("--split", default="test")
    diag.add_argument("--rows", type=int, default=64)
    diag.add_argument("--out", required=True, help="Report JSON path (CSV written alongside)")

    conv = sub.add_parser("convergence", help="A^kV and PageRank convergence of one attention map")
    _add_config_args(conv)
    conv.add_argument("--checkpoint", required=True)
    conv.add_argument("--split", default="test")
    conv.add_argument("--layer", type=int, default=0)
    conv.add_argument("--head", type=int, default=0)
    conv.add_argument("--row", type=int, default=0)
    conv.add_argument("--steps", type=int, default=200)
    conv.add_argument("--eps", default="0.05,0.15,0.5", help="Comma-separated PageRank damping values")
    conv.add_argument("--out", required=True)

    grad = sub.add_parser("gradcheck", help="Finite-difference gradient audit")
    _add_config_args(grad)
    grad.add_argument("--checkpoint", help="Audit a saved model (fresh model from the config otherwise)")
    grad.add_argument("--rows", type=int, default=4)
    grad.add_argument("--step", type=float, default=1e-5)
    grad.add_argument("--rtol", type=float, default=1e-4)
    grad.add_argument("--out", help="Audit JSON path")

    base = sub.add_parser("baseline", help="Classical baselines on the experiment data")
    _add_config_args(base)
    base.add_argument("--model", default="all",
                      help=f"One of {BaselineFactory.get_available_baselines()} or 'all'")
    base.add_argument("--out", help="Results JSON path")

    return parser


def _parse_overrides(items: List[str]) -> Dict[str, str]:
    overrides = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"❌ --set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value
    return overrides


def _csv_list(raw: Optional[str], cast=str) -> Optional[list]:
    if raw is None:
        return None
    return [cast(part.strip()) for part in raw.split(",") if part.strip()]


def load_experiment_config(args) -> ExperimentConfig:
    """Config file (or golden/defaults), then flags, then --set overrides"""
    if args.config:
        config = ExperimentConfig.from_file(args.config)
    elif args.golden:
        config = golden_config()
    else:
        config = ExperimentConfig()

    overrides: Dict[str, object] = {}
    if args.data:
        overrides["data.path"] = args.data
    if args.label:
        overrides["data.label"] = args.label
    overrides.update(_parse_overrides(args.overrides))
    return config.apply_overrides(overrides) if overrides else config


def _write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(make_json_safe(payload), indent=2))
    logger.info(f"💾 Wrote {path}")
    return path


def _checkpoint_batch(args):
    config = load_experiment_config(args)
    model, _ = load_checkpoint(args.checkpoint)
    dataset = config.data.load()
    batch = dataset.batch(args.split)
    return model, batch


# ============ COMMANDS ============

def cmd_synth(args) -> int:
    spec = SyntheticSpec(
        n_rows=args.rows,
        n_continuous=args.continuous,
        n_categorical=args.categorical,
        task=args.task,
        n_classes=args.classes,
        levels=args.levels,
        noise=args.noise,
    )
    dataset = generate_synthetic(spec, args.seed)
    save_csv(dataset, args.out)
    return 0


def cmd_train(args) -> int:
    config = load_experiment_config(args)
    output_dir = args.output_dir or Path(Config.OUTPUT_DIR) / config.name
    result = run_experiment(config, seed=args.seed, output_dir=output_dir)

    if args.pin_golden:
        _write_json(args.pin_golden, {
            'name': config.name,
            'seed': result.seed,
            'metric': result.primary_metric,
            'value': result.primary_value,
            'tolerance': GOLDEN_TOLERANCE,
        })
    return 0


def cmd_sweep(args) -> int:
    config = load_experiment_config(args)
    values = _csv_list(args.values, int if args.axis in ("order", "order_k", "k") else str)
    seeds = _csv_list(args.seeds, int)
    output_dir = Path(args.output_dir or Path(Config.OUTPUT_DIR) / f"{config.name}-sweep-{args.axis}")

    result = sweep(config, args.axis, values=values, seeds=seeds, output_dir=output_dir)
    logger.info("\n" + result.table[['value', 'score', 'n_failed']].to_string(index=False))

    if args.timing:
        overhead = timing_overhead(config, seed=(seeds or config.training.seeds)[0])
        _write_json(output_dir / "timing.json", overhead)
    return 0


def cmd_diagnose(args) -> int:
    model, batch = _checkpoint_batch(args)
    rows = np.arange(min(len(batch), args.rows))
    layer_report(model, batch.subset(rows)).save(args.out)
    return 0


def cmd_convergence(args) -> int:
    model, batch = _checkpoint_batch(args)
    report = attention_convergence_report(
        model, batch,
        layer=args.layer, head=args.head, row=args.row,
        steps=args.steps, eps_values=_csv_list(args.eps, float),
    )
    report.save(args.out)
    return 0


def cmd_gradcheck(args) -> int:
    config = load_experiment_config(args)
    dataset = config.data.load()
    if args.checkpoint:
        model, _ = load_checkpoint(args.checkpoint)
    else:
        seed = args.seed if args.seed is not None else config.training.seeds[0]
        model = TabularModel(config.model_for(dataset, seed))

    batch = dataset.batch('train')
    batch = batch.subset(np.arange(min(len(batch), args.rows)))
    audit = gradient_audit(model, batch, step=args.step, rtol=args.rtol)
    if args.out:
        _write_json(args.out, audit.to_dict())
    if not audit.passed:
        raise ContractError(
            f"gradient audit failed for {sorted(audit.failures())} "
            f"(max relative error {audit.max_rel_error:.3e})"
        )
    logger.info(f"✅ Gradient audit passed (max relative error {audit.max_rel_error:.3e})")
    return 0


def cmd_baseline(args) -> int:
    config = load_experiment_config(args)
    dataset = config.data.load()
    seed = args.seed if args.seed is not None else config.training.seeds[0]
    names = BaselineFactory.get_available_baselines() if args.model == "all" else [args.model]
    results = [run_baseline(name, dataset, seed=seed) for name in names]
    if args.out:
        _write_json(args.out, results)
    return 0


COMMANDS = {
    'synth': cmd_synth,
    'train': cmd_train,
    'sweep': cmd_sweep,
    'diagnose': cmd_diagnose,
    'convergence': cmd_convergence,
    'gradcheck': cmd_gradcheck,
    'baseline': cmd_baseline,
}


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry; returns the process exit code"""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=(args.log_level or Config.LOG_LEVEL).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stdout)]
    )

    try:
        Config.validate()
        if args.command in ('train', 'sweep'):
            logger.info(Config.get_summary())
        return COMMANDS[args.command](args)

    except CheAttError as e:
        logger.error(f"💥 {type(e).__name__}: {e}")
        return exit_code_for(e)

    except Exception as e:
        logger.error(f"💥 Unexpected error: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
