"""
nn/losses.py
🎯 Masked-reconstruction and supervised losses on the tape
"""
import logging
from typing import List, Optional

import numpy as np

from autodiff import Node, Tape
from errors import DataError, ParameterError, ShapeError

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA_CE = 1.0


def sample_mask(rng: np.random.Generator, n_rows: int, n_tokens: int, p: float) -> np.ndarray:
    """Per-cell Bernoulli(p) mask over (rows, tokens)"""
    return rng.random((n_rows, n_tokens)) < p


def loss_masked_pretrain(
    tape: Tape,
    cat_logits: List[Node],
    cont_pred: Optional[Node],
    cat_targets: np.ndarray,
    cont_targets: np.ndarray,
    mask: np.ndarray,
    lambda_ce: float = DEFAULT_LAMBDA_CE
) -> Node:
    """
    lambda_ce · CE(masked categorical cells) + MSE(masked continuous cells)

    Each term is averaged over its own masked cells; a term with no masked
    cells contributes 0, and no masked cells at all gives a 0 loss.

    Args:
        tape: Tape holding the reconstruction nodes
        cat_logits: Per categorical column logits (B x vocab_c)
        cont_pred: Continuous reconstructions (B x n_cont) or None
        cat_targets: Unmasked categorical codes (B x n_cat)
        cont_targets: Unmasked standardized values (B x n_cont)
        mask: (B x n_tokens) booleans, categorical tokens first
        lambda_ce: Weight of the cross-entropy term (>= 0)

    Returns:
        Scalar loss node
    """
    if lambda_ce < 0:
        raise ParameterError(f"lambda_ce must be >= 0, got {lambda_ce}")
    mask = np.asarray(mask, dtype=bool)
    n_cat = len(cat_logits)
    if mask.shape[1] != n_cat + (cont_pred.shape[1] if cont_pred is not None else 0):
        raise ShapeError(f"mask has {mask.shape[1]} tokens, reconstructions cover a different count")

    cat_mask = mask[:, :n_cat]
    cont_mask = mask[:, n_cat:]
    total = None

    n_masked_cat = int(cat_mask.sum())
    if n_masked_cat and lambda_ce > 0:
        ce = None
        for c, logits in enumerate(cat_logits):
            weights = cat_mask[:, c].astype(np.float64)
            if not weights.any():
                continue
            term = tape.cross_entropy(logits, cat_targets[:, c], weights=weights, normalizer=n_masked_cat)
            ce = term if ce is None else tape.add(ce, term)
        total = tape.scale(ce, lambda_ce)

    n_masked_cont = int(cont_mask.sum())
    if n_masked_cont and cont_pred is not None:
        mse = tape.squared_error(cont_pred, cont_targets, weights=cont_mask.astype(np.float64),
                                 normalizer=n_masked_cont)
        total = mse if total is None else tape.add(total, mse)

    return total if total is not None else tape.constant(0.0)


def loss_supervised(tape: Tape, head_output: Node, labels: np.ndarray, task: str) -> Node:
    """
    Softmax cross-entropy (binary / multiclass) or MSE (regression)

    Raises:
        DataError: Class label outside [0, C)
    """
    labels = np.asarray(labels)
    if task == "regression":
        pred = tape.reshape(head_output, (head_output.shape[0],))
        return tape.squared_error(pred, labels.astype(np.float64))

    n_classes = head_output.shape[-1]
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise DataError(f"class label out of range [0, {n_classes}): min={labels.min()}, max={labels.max()}")
    if not np.array_equal(labels, np.round(labels)):
        raise DataError("class labels must be integers")
    return tape.cross_entropy(head_output, labels.astype(np.int64))
