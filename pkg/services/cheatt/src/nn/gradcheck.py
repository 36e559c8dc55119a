"""
nn/gradcheck.py
🔍 Central finite-difference audit of every model parameter
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from autodiff import Node, Tape
from data import TableBatch
from .encoder import TabularModel
from .losses import loss_masked_pretrain, loss_supervised, sample_mask

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-5
DEFAULT_RTOL = 1e-4
SKIP_BELOW = 1e-8
ABS_FLOOR = 1e-10


@dataclass
class ParameterAudit:
    name: str
    size: int
    checked: int
    skipped: int
    max_rel_error: float
    worst_index: int
    passed: bool


@dataclass
class GradientAudit:
    """Per-parameter agreement between backward() and finite differences"""

    step: float
    rtol: float
    loss: float
    parameters: Dict[str, ParameterAudit] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.parameters.values())

    @property
    def max_rel_error(self) -> float:
        return max((p.max_rel_error for p in self.parameters.values()), default=0.0)

    def failures(self) -> Dict[str, ParameterAudit]:
        return {name: p for name, p in self.parameters.items() if not p.passed}

    def to_dict(self) -> dict:
        return {
            'step': self.step,
            'rtol': self.rtol,
            'loss': self.loss,
            'passed': self.passed,
            'max_rel_error': self.max_rel_error,
            'parameters': {name: asdict(p) for name, p in self.parameters.items()},
        }


def audit_objective(
    model: TabularModel,
    batch: TableBatch,
    mask: np.ndarray,
    lambda_ce: float = 1.0
) -> Tuple[Tape, Node]:
    """Supervised loss plus masked-reconstruction loss on the masked batch"""
    tape = Tape()
    masked = batch.masked(mask)
    activations = model.encode(tape, masked)
    head = model.head(tape, activations.output)
    supervised = loss_supervised(tape, head, batch.labels, model.config.task)
    cat_logits, cont_pred = model.reconstruct(tape, activations.output)
    recon = loss_masked_pretrain(
        tape, cat_logits, cont_pred, batch.categorical, batch.continuous, mask, lambda_ce
    )
    return tape, tape.add(supervised, recon)


def gradient_audit(
    model: TabularModel,
    batch: TableBatch,
    mask: Optional[np.ndarray] = None,
    step: float = DEFAULT_STEP,
    rtol: float = DEFAULT_RTOL,
    mask_probability: float = 0.3,
    seed: int = 0
) -> GradientAudit:
    """
    Compare analytic gradients with central differences entry by entry

    Entries where both magnitudes are below 1e-8 are skipped; the rest
    must satisfy |a − n| <= rtol · max(|a|, |n|) + 1e-10.

    Args:
        model: Model to audit (parameters are restored afterwards)
        batch: Input rows
        mask: Reconstruction mask (drawn from `seed` when omitted)
        step: Finite-difference step h
        rtol: Relative tolerance
        mask_probability: Bernoulli p of the drawn mask
        seed: Mask seed

    Returns:
        GradientAudit
    """
    if mask is None:
        rng = np.random.default_rng(seed)
        mask = sample_mask(rng, len(batch), model.config.n_tokens, mask_probability)

    tape, loss = audit_objective(model, batch, mask)
    analytic = tape.backward(loss)
    report = GradientAudit(step=step, rtol=rtol, loss=float(loss.value))

    logger.info(f"🔍 Auditing {len(model.params)} parameter tensors ({model.n_params} entries)...")

    for name in list(model.params):
        # perturbations must write through to the model's own array
        value = model.params[name] = np.ascontiguousarray(model.params[name])
        grad = analytic[name]
        flat = value.reshape(-1)
        numeric = np.empty(flat.size)
        for idx in range(flat.size):
            original = flat[idx]
            flat[idx] = original + step
            plus = float(audit_objective(model, batch, mask)[1].value)
            flat[idx] = original - step
            minus = float(audit_objective(model, batch, mask)[1].value)
            flat[idx] = original
            numeric[idx] = (plus - minus) / (2.0 * step)

        a = grad.reshape(-1)
        scale = np.maximum(np.abs(a), np.abs(numeric))
        skip = scale < SKIP_BELOW
        err = np.abs(a - numeric)
        rel = np.where(skip, 0.0, err / np.maximum(scale, SKIP_BELOW))
        ok = skip | (err <= rtol * scale + ABS_FLOOR)
        worst = int(np.argmax(rel)) if rel.size else 0

        report.parameters[name] = ParameterAudit(
            name=name,
            size=int(flat.size),
            checked=int((~skip).sum()),
            skipped=int(skip.sum()),
            max_rel_error=float(rel.max()) if rel.size else 0.0,
            worst_index=worst,
            passed=bool(ok.all()),
        )
        if not ok.all():
            logger.warning(f"  ⚠️ {name}: max relative error {rel.max():.3e} at entry {worst}")

    status = "✅ passed" if report.passed else "❌ failed"
    logger.info(f"{status}: max relative error {report.max_rel_error:.3e}")
    return report
