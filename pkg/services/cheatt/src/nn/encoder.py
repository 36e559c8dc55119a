"""
nn/encoder.py
🤖 Tabular Transformer encoder with Vanilla or CheAtt self-attention
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from autodiff import Node, Tape
from data import UNK, TableBatch
from errors import ShapeError
from linalg import softmax_rows
from polyfilter import BasisFactory, PolyFilter, PolynomialBasis, default_coefficients
from .config import ModelConfig

logger = logging.getLogger(__name__)


# ============ PARAMETERS ============

def _uniform(rng: np.random.Generator, fan_in: int, shape: Tuple[int, ...]) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_params(config: ModelConfig) -> Dict[str, np.ndarray]:
    """
    Seeded parameter initialization

    Projections: uniform(±1/√fan_in); biases and LayerNorm shifts: 0;
    LayerNorm scales: 1. Embedding tables and the continuous embedding
    bias are drawn like projections so every token starts distinct.
    CheAtt coefficients take the default filter init and draw nothing
    from the RNG, so a Vanilla and a CheAtt model with equal seeds share
    every other parameter.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    d, h, f = config.embed_dim, config.head_hidden, config.ffn_hidden
    params: Dict[str, np.ndarray] = {}

    if config.n_categorical:
        total_vocab = sum(config.categorical_cardinalities)
        params["embed.categorical"] = _uniform(rng, d, (total_vocab, d))
    if config.n_continuous:
        params["embed.continuous.weight"] = _uniform(rng, d, (config.n_continuous, d))
        params["embed.continuous.bias"] = _uniform(rng, d, (config.n_continuous, d))

    for i in range(config.depth):
        prefix = f"layer{i}"
        for name in ("wq", "wk", "wv", "wo"):
            params[f"{prefix}.attn.{name}"] = _uniform(rng, d, (d, d))
        params[f"{prefix}.attn.bo"] = np.zeros(d)
        params[f"{prefix}.norm1.gamma"] = np.ones(d)
        params[f"{prefix}.norm1.beta"] = np.zeros(d)
        params[f"{prefix}.ffn.w1"] = _uniform(rng, d, (d, f))
        params[f"{prefix}.ffn.b1"] = np.zeros(f)
        params[f"{prefix}.ffn.w2"] = _uniform(rng, f, (f, d))
        params[f"{prefix}.ffn.b2"] = np.zeros(d)
        params[f"{prefix}.norm2.gamma"] = np.ones(d)
        params[f"{prefix}.norm2.beta"] = np.zeros(d)
        if config.attention_kind == "cheatt":
            params[f"{prefix}.cheatt.alpha"] = default_coefficients(config.order)

    params["head.w1"] = _uniform(rng, d, (d, h))
    params["head.b1"] = np.zeros(h)
    params["head.w2"] = _uniform(rng, h, (h, config.n_outputs))
    params["head.b2"] = np.zeros(config.n_outputs)

    for c, card in enumerate(config.categorical_cardinalities):
        params[f"recon.cat{c}.weight"] = _uniform(rng, d, (d, card))
        params[f"recon.cat{c}.bias"] = np.zeros(card)
    if config.n_continuous:
        params["recon.cont.weight"] = _uniform(rng, d, (config.n_continuous, d))
        params["recon.cont.bias"] = np.zeros(config.n_continuous)

    return params


def _param(tape: Tape, params: Dict[str, np.ndarray], name: str) -> Node:
    if name not in params:
        raise ShapeError(f"missing parameter {name!r}")
    return tape.param(name, params[name])


# ============ FORWARD ============

@dataclass
class EncoderActivations:
    """Feature maps X(0)..X(L) and per-layer, per-head attention maps"""

    features: List[np.ndarray]
    attention: List[List[np.ndarray]] = field(default_factory=list)
    output: Optional[Node] = None

    @property
    def depth(self) -> int:
        return len(self.features) - 1


def embed_columns(batch: TableBatch, config: ModelConfig, params: Dict[str, np.ndarray], tape: Tape) -> Node:
    """
    Token embeddings (B x n x d), categorical tokens first

    Categorical codes index one shared table through per-column offsets;
    codes outside a column's vocabulary fall back to UNK. A continuous
    value c becomes c·w + b with per-column vectors w, b.
    """
    n_rows = len(batch)
    tokens = []

    if config.n_categorical:
        codes = np.asarray(batch.categorical, dtype=np.int64)
        if codes.shape != (n_rows, config.n_categorical):
            raise ShapeError(f"categorical block {codes.shape}, expected ({n_rows}, {config.n_categorical})")
        cards = np.asarray(config.categorical_cardinalities)
        codes = np.where((codes < 0) | (codes >= cards), UNK, codes)
        offsets = np.concatenate([[0], np.cumsum(cards)[:-1]])
        table = _param(tape, params, "embed.categorical")
        tokens.append(tape.gather(table, codes + offsets))

    if config.n_continuous:
        values = np.asarray(batch.continuous, dtype=np.float64)
        if values.shape != (n_rows, config.n_continuous):
            raise ShapeError(f"continuous block {values.shape}, expected ({n_rows}, {config.n_continuous})")
        x = tape.constant(values[..., None])
        w = _param(tape, params, "embed.continuous.weight")
        b = _param(tape, params, "embed.continuous.bias")
        tokens.append(tape.add(tape.mul(x, w), b))

    return tokens[0] if len(tokens) == 1 else tape.concat(tokens, axis=-2)


def encoder_forward(
    x0,
    config: ModelConfig,
    params: Dict[str, np.ndarray],
    tape: Tape,
    basis: Optional[PolynomialBasis] = None
) -> EncoderActivations:
    """
    Run `depth` post-norm Transformer blocks

    Each block: per-head Q, K, V -> attention map -> AV (Vanilla) or
    Σ α_k P_k(A) V (CheAtt) -> head concat -> output projection ->
    residual + LayerNorm -> GELU feed-forward -> residual + LayerNorm.

    Args:
        x0: Token embeddings, (n, d) or (B, n, d); Node or array
        config: Model configuration
        params: Parameter arrays by name
        tape: Tape recording every intermediate
        basis: Polynomial basis (built from config when omitted)

    Returns:
        EncoderActivations with depth + 1 feature maps
    """
    x = x0 if isinstance(x0, Node) else tape.constant(x0)
    if x.value.ndim < 2 or x.shape[-1] != config.embed_dim:
        raise ShapeError(f"encoder input {x.shape} does not end in embed_dim {config.embed_dim}")

    cheatt = config.attention_kind == "cheatt"
    if cheatt and basis is None:
        basis = BasisFactory.create(config.basis, config.basis_params)

    n_heads, head_dim = config.n_heads, config.head_dim
    scale = np.sqrt(head_dim)
    features = [x.value.copy()]
    attention: List[List[np.ndarray]] = []

    for i in range(config.depth):
        def p(name: str) -> Node:
            return _param(tape, params, f"layer{i}.{name}")

        q = tape.matmul(x, p("attn.wq"))
        k = tape.matmul(x, p("attn.wk"))
        v = tape.matmul(x, p("attn.wv"))
        alpha = p("cheatt.alpha") if cheatt else None

        heads, maps = [], []
        for h in range(n_heads):
            lo, hi = h * head_dim, (h + 1) * head_dim
            qh = tape.slice(q, lo, hi)
            kh = tape.slice(k, lo, hi)
            vh = tape.slice(v, lo, hi)
            a = tape.softmax_rows(tape.matmul(qh, tape.transpose(kh)), scale)
            maps.append(a.value)
            if cheatt:
                heads.append(tape.poly_filter(a, vh, alpha, basis, config.order))
            else:
                heads.append(tape.matmul(a, vh))

        mixed = heads[0] if n_heads == 1 else tape.concat(heads, axis=-1)
        attn_out = tape.add(tape.matmul(mixed, p("attn.wo")), p("attn.bo"))
        x = tape.layer_norm(tape.add(x, attn_out), p("norm1.gamma"), p("norm1.beta"))

        hidden = tape.gelu(tape.add(tape.matmul(x, p("ffn.w1")), p("ffn.b1")))
        ffn_out = tape.add(tape.matmul(hidden, p("ffn.w2")), p("ffn.b2"))
        x = tape.layer_norm(tape.add(x, ffn_out), p("norm2.gamma"), p("norm2.beta"))

        features.append(x.value.copy())
        attention.append(maps)

    return EncoderActivations(features=features, attention=attention, output=x)


# ============ MODEL ============

class TabularModel:
    """
    Encoder + prediction head + masked-reconstruction heads

    The model owns its parameter dict; training code replaces entries
    through the optimizer step.
    """

    def __init__(self, config: ModelConfig, params: Optional[Dict[str, np.ndarray]] = None):
        config.validate()
        self.config = config
        self.params = params if params is not None else init_params(config)
        self.basis = BasisFactory.create(config.basis, config.basis_params)

    @property
    def n_params(self) -> int:
        return int(sum(v.size for v in self.params.values()))

    def embed(self, tape: Tape, batch: TableBatch) -> Node:
        return embed_columns(batch, self.config, self.params, tape)

    def encode(self, tape: Tape, batch: TableBatch) -> EncoderActivations:
        x0 = self.embed(tape, batch)
        return encoder_forward(x0, self.config, self.params, tape, basis=self.basis)

    def head(self, tape: Tape, x: Node) -> Node:
        """Mean-pool tokens -> Linear -> GELU -> Linear"""
        pooled = tape.mean_axis(x, axis=-2)
        hidden = tape.gelu(tape.add(
            tape.matmul(pooled, _param(tape, self.params, "head.w1")),
            _param(tape, self.params, "head.b1")
        ))
        return tape.add(
            tape.matmul(hidden, _param(tape, self.params, "head.w2")),
            _param(tape, self.params, "head.b2")
        )

    def reconstruct(self, tape: Tape, x: Node) -> Tuple[List[Node], Optional[Node]]:
        """
        Per-column reconstructions from final-layer tokens

        Returns:
            (categorical logits per column (B x vocab_c), continuous predictions (B x n_cont) or None)
        """
        cfg = self.config
        n_rows = x.shape[0]
        cat_logits = []
        for c in range(cfg.n_categorical):
            token = tape.reshape(tape.slice(x, c, c + 1, axis=-2), (n_rows, cfg.embed_dim))
            cat_logits.append(tape.add(
                tape.matmul(token, _param(tape, self.params, f"recon.cat{c}.weight")),
                _param(tape, self.params, f"recon.cat{c}.bias")
            ))

        cont_pred = None
        if cfg.n_continuous:
            tokens = tape.slice(x, cfg.n_categorical, cfg.n_tokens, axis=-2)
            weighted = tape.mul(tokens, _param(tape, self.params, "recon.cont.weight"))
            cont_pred = tape.add(tape.sum_axis(weighted, axis=-1), _param(tape, self.params, "recon.cont.bias"))
        return cat_logits, cont_pred

    def forward(self, batch: TableBatch, tape: Optional[Tape] = None) -> Tuple[Tape, EncoderActivations, Node]:
        """Encode a batch and apply the prediction head"""
        tape = tape or Tape()
        activations = self.encode(tape, batch)
        return tape, activations, self.head(tape, activations.output)

    def predict_scores(self, batch: TableBatch) -> np.ndarray:
        """
        Class probabilities (B x C) or regression outputs (B,)
        """
        _, _, out = self.forward(batch)
        if self.config.task == "regression":
            return out.value[:, 0].copy()
        return softmax_rows(out.value)

    def filters(self) -> List[PolyFilter]:
        """Per-layer filters; Vanilla layers report the degree-1 filter g(λ) = λ"""
        cfg = self.config
        result = []
        for i in range(cfg.depth):
            key = f"layer{i}.cheatt.alpha"
            if key in self.params and cfg.attention_kind == "cheatt":
                result.append(PolyFilter(basis=self.basis, order=cfg.order, coeffs=self.params[key]))
            else:
                result.append(PolyFilter.vanilla(basis="power", order=1))
        return result

    def copy(self) -> "TabularModel":
        return TabularModel(self.config, {k: v.copy() for k, v in self.params.items()})
