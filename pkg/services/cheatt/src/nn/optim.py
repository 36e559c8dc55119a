"""
nn/optim.py
🏃 Adam with decoupled weight decay
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

# Filter coefficients never decay
NO_DECAY_SUFFIXES = (".cheatt.alpha",)


@dataclass
class AdamState:
    """First/second moment estimates and the step counter"""

    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: Dict[str, np.ndarray],
    grads: Dict[str, np.ndarray],
    state: AdamState,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps_opt: float = 1e-8,
    weight_decay: float = 0.0,
    no_decay: Iterable[str] = NO_DECAY_SUFFIXES
) -> Tuple[Dict[str, np.ndarray], AdamState]:
    """
    One bias-corrected Adam update

    Weight decay is decoupled (θ ← θ − lr·wd·θ) and skipped for names
    ending in any `no_decay` suffix. Parameters without a gradient entry
    are left untouched.

    Returns:
        (new params dict, new state); inputs are not modified
    """
    no_decay = tuple(no_decay)
    step = state.step + 1
    new_params, new_m, new_v = {}, dict(state.m), dict(state.v)
    c1 = 1.0 - beta1 ** step
    c2 = 1.0 - beta2 ** step

    for name, value in params.items():
        g = grads.get(name)
        if g is None:
            new_params[name] = value
            continue
        m = beta1 * state.m.get(name, np.zeros_like(value)) + (1.0 - beta1) * g
        v = beta2 * state.v.get(name, np.zeros_like(value)) + (1.0 - beta2) * g * g
        update = lr * (m / c1) / (np.sqrt(v / c2) + eps_opt)
        if weight_decay and not name.endswith(no_decay):
            update = update + lr * weight_decay * value
        new_params[name] = value - update
        new_m[name] = m
        new_v[name] = v

    return new_params, AdamState(step=step, m=new_m, v=new_v)
