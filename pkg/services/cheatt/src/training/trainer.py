"""
training/trainer.py
🏋️ Experiment Orchestrator: masked pretraining -> fine-tuning -> evaluation
"""
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterator, List, Optional

import numpy as np
from tqdm import tqdm

from autodiff import Tape
from config import Config
from data import TableBatch, TableDataset
from diagnostics import layer_report
from errors import DataError, UndefinedMetricError
from evaluation import calculate_all_metrics, primary_metric_name
from nn import AdamState, TabularModel, adam_step, loss_masked_pretrain, loss_supervised, sample_mask
from polyfilter import coefficient_decay_profile
from storage import STATUS_FAILED, ExperimentResult, save_checkpoint
from .callbacks import (
    BestParamsCallback,
    CallbackList,
    EarlyStoppingCallback,
    LoggingCallback,
    MetricTrackerCallback
)
from .experiment import ExperimentConfig

logger = logging.getLogger(__name__)

# Independent RNG streams per run seed
_PRETRAIN_STREAM = 1
_FINETUNE_STREAM = 2


def _banner(title: str):
    logger.info("=" * 70)
    logger.info(title)
    logger.info("=" * 70)


def _minibatches(index: np.ndarray, batch_size: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    order = rng.permutation(index)
    for start in range(0, order.size, batch_size):
        yield order[start:start + batch_size]


def supervised_loss(model: TabularModel, batch: TableBatch) -> float:
    """Supervised loss of a batch without a parameter update"""
    tape, _, out = model.forward(batch)
    return float(loss_supervised(tape, out, batch.labels, model.config.task).value)


class ExperimentRunner:
    """
    Orchestrates một experiment run

    Flow:
    1. Load / generate data
    2. Build model (column layout from the dataset, seed from the run)
    3. Masked pretraining (optional)
    4. Supervised fine-tuning with early stopping on validation loss
    5. Test evaluation + inference timing
    6. Oversmoothing report, checkpoint and result record
    """

    def __init__(
        self,
        config: ExperimentConfig,
        seed: Optional[int] = None,
        output_dir=None,
        dataset: Optional[TableDataset] = None
    ):
        """
        Args:
            config: Experiment configuration
            seed: Run seed (defaults to the first configured seed)
            output_dir: Where to write result/checkpoint/report (nothing written if None)
            dataset: Pre-loaded dataset (skips loading)
        """
        config.validate()
        self.config = config
        self.seed = int(seed if seed is not None else config.training.seeds[0])
        self.output_dir = Path(output_dir) if output_dir is not None else None
        self.dataset = dataset
        self.model: Optional[TabularModel] = None
        self.result = ExperimentResult(name=config.name, seed=self.seed, config=config.to_dict())

    # ============ STAGES ============

    def pretrain(self, model: TabularModel, dataset: TableDataset) -> List[float]:
        """
        Masked-cell reconstruction on the train split

        Each epoch redraws a Bernoulli(p) mask per cell; the prediction
        head receives no gradient here.
        """
        cfg = self.config.training
        rng = np.random.default_rng((self.seed, _PRETRAIN_STREAM))
        train_index = dataset.splits['train']
        state = AdamState()

        tracker = MetricTrackerCallback()
        callbacks = CallbackList([LoggingCallback(cfg.log_every, stage="Pretraining"), tracker])
        callbacks.on_train_begin(model=model)

        for epoch in tqdm(range(1, cfg.pretrain_epochs + 1), desc="pretrain",
                          disable=not Config.SHOW_PROGRESS):
            started = time.perf_counter()
            total = 0.0
            for rows in _minibatches(train_index, cfg.batch_size, rng):
                batch = dataset.batch().subset(rows)
                mask = sample_mask(rng, len(batch), model.config.n_tokens, cfg.mask_probability)
                tape = Tape()
                activations = model.encode(tape, batch.masked(mask))
                cat_logits, cont_pred = model.reconstruct(tape, activations.output)
                loss = loss_masked_pretrain(
                    tape, cat_logits, cont_pred,
                    batch.categorical, batch.continuous, mask, cfg.lambda_ce
                )
                total += float(loss.value) * len(batch)
                if loss.op == "constant":
                    continue
                grads = tape.backward(loss)
                model.params, state = adam_step(
                    model.params, grads, state, lr=cfg.lr, weight_decay=cfg.weight_decay
                )
            self.result.timing.pretrain_epoch_seconds.append(time.perf_counter() - started)
            callbacks.on_epoch_end(epoch, {'pretrain_loss': total / max(train_index.size, 1)}, model=model)

        callbacks.on_train_end(model=model)
        return tracker.get_history().get('pretrain_loss', [])

    def finetune(self, model: TabularModel, dataset: TableDataset) -> Dict[str, List[float]]:
        """
        Supervised training of encoder + head

        The validation loss drives early stopping and best-parameter
        restore; with an empty validation split the train loss stands in.
        """
        cfg = self.config.training
        rng = np.random.default_rng((self.seed, _FINETUNE_STREAM))
        train_index = dataset.splits['train']
        valid_batch = dataset.batch('valid')
        if len(valid_batch) == 0:
            logger.warning("⚠️ Validation split is empty; early stopping monitors the train loss")
        state = AdamState()

        early = EarlyStoppingCallback(monitor='val_loss', patience=cfg.patience)
        best = BestParamsCallback(monitor='val_loss')
        tracker = MetricTrackerCallback()
        callbacks = CallbackList([early, best, LoggingCallback(cfg.log_every, stage="Fine-tuning"), tracker])
        callbacks.on_train_begin(model=model)

        for epoch in tqdm(range(1, cfg.finetune_epochs + 1), desc="finetune",
                          disable=not Config.SHOW_PROGRESS):
            callbacks.on_epoch_begin(epoch, model=model)
            started = time.perf_counter()
            total = 0.0
            for rows in _minibatches(train_index, cfg.batch_size, rng):
                batch = dataset.batch().subset(rows)
                tape, _, out = model.forward(batch)
                loss = loss_supervised(tape, out, batch.labels, model.config.task)
                total += float(loss.value) * len(batch)
                grads = tape.backward(loss)
                model.params, state = adam_step(
                    model.params, grads, state, lr=cfg.lr, weight_decay=cfg.weight_decay
                )
            self.result.timing.finetune_epoch_seconds.append(time.perf_counter() - started)

            train_loss = total / max(train_index.size, 1)
            val_loss = supervised_loss(model, valid_batch) if len(valid_batch) else train_loss
            callbacks.on_epoch_end(epoch, {'train_loss': train_loss, 'val_loss': val_loss}, model=model)
            if callbacks.should_stop:
                break

        callbacks.on_train_end(model=model)
        best.restore(model)
        self.result.best_epoch = best.best_epoch
        self.result.stopped_epoch = early.stopped_epoch or None
        return tracker.get_history()

    def evaluate(self, model: TabularModel, dataset: TableDataset) -> Dict[str, float]:
        """Test-split metrics and per-1000-sample inference time"""
        test_batch = dataset.batch('test')
        if len(test_batch) == 0:
            raise DataError("test split is empty; no metric can be computed")

        started = time.perf_counter()
        scores = model.predict_scores(test_batch)
        elapsed = time.perf_counter() - started
        self.result.timing.inference_seconds_per_1000 = elapsed / len(test_batch) * 1000.0

        metrics = calculate_all_metrics(model.config.task, scores, test_batch.labels)
        logger.info("📊 Test Metrics:")
        for metric, value in metrics.items():
            logger.info(f"  {metric.upper()}: {value:.4f}")
        return metrics

    def diagnose(self, model: TabularModel, dataset: TableDataset) -> Optional[dict]:
        """Oversmoothing report on the first test rows (None when undefined)"""
        test_batch = dataset.batch('test')
        rows = np.arange(min(len(test_batch), self.config.training.report_rows))
        try:
            report = layer_report(model, test_batch.subset(rows))
        except UndefinedMetricError as e:
            logger.warning(f"⚠️ Oversmoothing report skipped: {e}")
            return None
        if self.output_dir is not None:
            report.save(self.output_dir / "oversmoothing.json")
        return report.to_dict()

    # ============ PIPELINE ============

    def run(self) -> ExperimentResult:
        """
        Full experiment pipeline

        Returns:
            ExperimentResult

        Raises:
            Whatever a stage raises, after the partial result is written
        """
        _banner(f"🏋️ STARTING EXPERIMENT {self.config.name} (seed {self.seed})")
        result = self.result
        result.timing.started_at = datetime.now(timezone.utc).isoformat()
        started = time.perf_counter()

        try:
            _banner("STEP 1: LOADING DATA")
            dataset = self.dataset if self.dataset is not None else self.config.data.load()
            result.task = dataset.label.task
            result.primary_metric = primary_metric_name(dataset.label.task)
            result.split_sizes = {name: int(idx.size) for name, idx in dataset.splits.items()}

            _banner("STEP 2: BUILDING MODEL")
            model_config = self.config.model_for(dataset, self.seed)
            result.config['model'] = model_config.to_dict()
            model = TabularModel(model_config)
            self.model = model
            logger.info(f"  {model_config.attention_kind} encoder, depth {model_config.depth}, "
                        f"{model_config.n_tokens} tokens, {model.n_params} parameters")

            if self.config.training.pretrain_epochs:
                _banner("STEP 3: MASKED PRETRAINING")
                result.history['pretrain_loss'] = self.pretrain(model, dataset)

            _banner("STEP 4: FINE-TUNING")
            result.history.update(self.finetune(model, dataset))

            _banner("STEP 5: EVALUATION")
            result.metrics = self.evaluate(model, dataset)
            result.coefficient_profile = coefficient_decay_profile(model.filters())

            _banner("STEP 6: DIAGNOSTICS & SAVING")
            result.oversmoothing = self.diagnose(model, dataset)
            if self.output_dir is not None:
                save_checkpoint(model, self.output_dir / "checkpoint.json", metadata={
                    'name': result.name,
                    'seed': result.seed,
                    'metrics': result.metrics,
                })

        except Exception as e:
            result.status = STATUS_FAILED
            result.error = f"{type(e).__name__}: {e}"
            logger.error(f"💥 Experiment failed: {e}", exc_info=True)
            raise

        finally:
            result.timing.duration_seconds = time.perf_counter() - started
            result.timing.completed_at = datetime.now(timezone.utc).isoformat()
            if self.output_dir is not None:
                result.save(self.output_dir / "result.json")

        _banner("🎉 EXPERIMENT COMPLETED SUCCESSFULLY")
        logger.info(f"Duration: {result.timing.duration_seconds:.1f}s")
        logger.info(f"Test {result.primary_metric.upper()}: {result.primary_value:.4f}")
        return result

    def get_training_summary(self) -> str:
        """Get training summary"""
        result = self.result
        summary = ["=" * 70, "EXPERIMENT SUMMARY", "=" * 70]
        summary.append(f"Name: {result.name}  Seed: {result.seed}  Status: {result.status}")
        if result.timing.started_at:
            summary.append(f"Started: {result.timing.started_at}")
        if result.timing.completed_at:
            summary.append(f"Completed: {result.timing.completed_at}")
            summary.append(f"Duration: {result.timing.duration_seconds:.1f}s")
        if result.best_epoch is not None:
            summary.append(f"Best epoch: {result.best_epoch}")
        if result.timing.finetune_epoch_seconds:
            summary.append(f"Mean epoch time: {result.timing.mean_epoch_seconds:.3f}s")
        summary.append("\nTest Metrics:")
        for k, v in result.metrics.items():
            summary.append(f"  {k}: {v:.4f}")
        if result.error:
            summary.append(f"\nError: {result.error}")
        return "\n".join(summary)


def run_experiment(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    output_dir=None,
    dataset: Optional[TableDataset] = None
) -> ExperimentResult:
    """
    Run one experiment

    Args:
        config: Experiment configuration
        seed: Run seed (defaults to config.training.seeds[0])
        output_dir: Directory for result.json, checkpoint.json, oversmoothing.json
        dataset: Pre-loaded dataset

    Returns:
        ExperimentResult; deterministic given config and seed apart from `timing`
    """
    return ExperimentRunner(config, seed=seed, output_dir=output_dir, dataset=dataset).run()
