"""
training/callbacks.py
🔔 Training Callbacks
"""
import logging
import time
from typing import Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


class TrainingCallback:
    """Base class cho training callbacks"""

    def on_train_begin(self, **kwargs):
        """Called at the beginning of training"""
        pass

    def on_train_end(self, **kwargs):
        """Called at the end of training"""
        pass

    def on_epoch_begin(self, epoch: int, **kwargs):
        """Called at the beginning of each epoch"""
        pass

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        """Called at the end of each epoch"""
        pass


def _improved(current: float, best: float, mode: str, min_delta: float) -> bool:
    if mode == 'min':
        return current < best - min_delta
    return current > best + min_delta


class EarlyStoppingCallback(TrainingCallback):
    """
    Early stopping callback
    Stops training if metric doesn't improve
    """

    def __init__(
        self,
        monitor: str = 'val_loss',
        patience: int = 20,
        min_delta: float = 0.0,
        mode: str = 'min'
    ):
        """
        Args:
            monitor: Metric to monitor
            patience: Number of epochs to wait
            min_delta: Minimum change to qualify as improvement
            mode: 'min' or 'max'
        """
        self.monitor = monitor
        self.patience = patience
        self.min_delta = min_delta
        self.mode = mode
        self.on_train_begin()

    def on_train_begin(self, **kwargs):
        self.wait = 0
        self.stopped_epoch = 0
        self.best_value = float('inf') if self.mode == 'min' else float('-inf')
        self.should_stop = False

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        if logs is None:
            return

        current_value = logs.get(self.monitor)
        if current_value is None:
            logger.warning(f"Early stopping: {self.monitor} not found in logs")
            return

        if _improved(current_value, self.best_value, self.mode, self.min_delta):
            self.best_value = current_value
            self.wait = 0
            logger.debug(f"  ✨ {self.monitor} improved to {current_value:.6f}")
        else:
            self.wait += 1
            if self.wait >= self.patience:
                self.stopped_epoch = epoch
                self.should_stop = True
                logger.info(f"  🛑 Early stopping triggered at epoch {epoch}")


class LoggingCallback(TrainingCallback):
    """
    Logging callback
    Logs training progress
    """

    def __init__(self, log_every: int = 10, stage: str = "Training"):
        """
        Args:
            log_every: Log every N epochs
            stage: Label used in start/end lines
        """
        self.log_every = log_every
        self.stage = stage
        self.start_time = None

    def on_train_begin(self, **kwargs):
        self.start_time = time.perf_counter()
        logger.info(f"🏁 {self.stage} started")

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        if logs and epoch % self.log_every == 0:
            log_str = ", ".join([f"{k}={v:.4f}" for k, v in logs.items()])
            logger.info(f"  Epoch {epoch}: {log_str}")

    def on_train_end(self, **kwargs):
        if self.start_time:
            duration = time.perf_counter() - self.start_time
            logger.info(f"✅ {self.stage} completed in {duration:.1f}s")


class MetricTrackerCallback(TrainingCallback):
    """
    Metric tracking callback
    Tracks every logged value per epoch
    """

    def __init__(self):
        self.history: Dict[str, List[float]] = {}

    def on_train_begin(self, **kwargs):
        self.history = {}

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        for key, value in (logs or {}).items():
            self.history.setdefault(key, []).append(float(value))

    def get_history(self) -> Dict[str, List[float]]:
        """Get training history"""
        return {k: list(v) for k, v in self.history.items()}


class BestParamsCallback(TrainingCallback):
    """
    Keeps a copy of the model parameters at the best monitored epoch

    Expects `model` (anything with a `params` dict) in the epoch kwargs.
    """

    def __init__(self, monitor: str = 'val_loss', mode: str = 'min'):
        self.monitor = monitor
        self.mode = mode
        self.on_train_begin()

    def on_train_begin(self, **kwargs):
        self.best_value = float('inf') if self.mode == 'min' else float('-inf')
        self.best_epoch: Optional[int] = None
        self.best_params: Optional[Dict[str, np.ndarray]] = None

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        model = kwargs.get('model')
        current_value = (logs or {}).get(self.monitor)
        if model is None or current_value is None:
            return
        if _improved(current_value, self.best_value, self.mode, 0.0):
            self.best_value = current_value
            self.best_epoch = epoch
            self.best_params = {k: v.copy() for k, v in model.params.items()}

    def restore(self, model) -> bool:
        """Load the best parameters back into the model; False if none were kept"""
        if self.best_params is None:
            return False
        model.params = {k: v.copy() for k, v in self.best_params.items()}
        logger.info(f"  ♻️ Restored parameters from epoch {self.best_epoch} "
                    f"({self.monitor}={self.best_value:.6f})")
        return True


class CallbackList:
    """
    Container cho multiple callbacks
    """

    def __init__(self, callbacks: list = None):
        self.callbacks = callbacks or []

    def add(self, callback: TrainingCallback):
        """Add callback"""
        self.callbacks.append(callback)

    def on_train_begin(self, **kwargs):
        for callback in self.callbacks:
            callback.on_train_begin(**kwargs)

    def on_train_end(self, **kwargs):
        for callback in self.callbacks:
            callback.on_train_end(**kwargs)

    def on_epoch_begin(self, epoch: int, **kwargs):
        for callback in self.callbacks:
            callback.on_epoch_begin(epoch, **kwargs)

    def on_epoch_end(self, epoch: int, logs: Dict = None, **kwargs):
        for callback in self.callbacks:
            callback.on_epoch_end(epoch, logs, **kwargs)

    @property
    def should_stop(self) -> bool:
        return any(getattr(cb, 'should_stop', False) for cb in self.callbacks)
