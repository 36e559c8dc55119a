"""
autodiff/tape.py
🔙 Reverse-mode differentiation tape over dense (optionally batched) arrays
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import ContractError, NonFiniteError, ShapeError
from linalg import softmax_rows as _softmax_rows
from polyfilter import PolynomialBasis, combine_terms

logger = logging.getLogger(__name__)

GELU_C = np.sqrt(2.0 / np.pi)
GELU_K = 0.044715
LAYER_NORM_EPS = 1e-5

Vjp = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


class Node:
    """One recorded operation: kind, input ids, forward value, adjoint rule"""

    __slots__ = ("id", "op", "inputs", "value", "vjp", "name")

    def __init__(
        self,
        node_id: int,
        op: str,
        inputs: Tuple[int, ...],
        value: np.ndarray,
        vjp: Optional[Vjp] = None,
        name: Optional[str] = None
    ):
        self.id = node_id
        self.op = op
        self.inputs = inputs
        self.value = value
        self.vjp = vjp
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def __repr__(self) -> str:
        return f"Node(id={self.id}, op={self.op}, shape={self.shape})"


def _swap(x: np.ndarray) -> np.ndarray:
    return np.swapaxes(x, -1, -2)


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum grad back down to an operand's (pre-broadcast) shape"""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, size in enumerate(shape) if size == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tape:
    """
    Append-only operation record

    Node ids are assigned in creation order, so every input precedes its
    consumers and a single reverse sweep over the list is a valid
    reverse topological traversal.
    """

    def __init__(self):
        self.nodes: List[Node] = []
        self.params: Dict[str, Node] = {}

    # ============ RECORDING ============

    def _record(self, op: str, inputs: Sequence[Node], value: np.ndarray, vjp: Optional[Vjp] = None,
                name: Optional[str] = None) -> Node:
        value = np.asarray(value, dtype=np.float64)
        if not np.all(np.isfinite(value)):
            raise NonFiniteError(f"{op} produced non-finite values")
        node = Node(len(self.nodes), op, tuple(n.id for n in inputs), value, vjp, name)
        self.nodes.append(node)
        return node

    def param(self, name: str, value: np.ndarray) -> Node:
        """Differentiable leaf; one node per name per tape"""
        if name in self.params:
            return self.params[name]
        node = self._record("param", (), np.array(value, dtype=np.float64), name=name)
        self.params[name] = node
        return node

    def constant(self, value: np.ndarray) -> Node:
        return self._record("constant", (), np.array(value, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.nodes)

    # ============ ELEMENTWISE ============

    def add(self, a: Node, b: Node) -> Node:
        sa, sb = a.shape, b.shape
        return self._record(
            "add", (a, b), a.value + b.value,
            lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb))
        )

    def sub(self, a: Node, b: Node) -> Node:
        sa, sb = a.shape, b.shape
        return self._record(
            "sub", (a, b), a.value - b.value,
            lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb))
        )

    def mul(self, a: Node, b: Node) -> Node:
        av, bv = a.value, b.value
        return self._record(
            "mul", (a, b), av * bv,
            lambda g: (_unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape))
        )

    def scale(self, a: Node, c: float) -> Node:
        c = float(c)
        return self._record("scale", (a,), c * a.value, lambda g: (c * g,))

    def gelu(self, x: Node) -> Node:
        """tanh-approximated GELU"""
        xv = x.value
        t = np.tanh(GELU_C * (xv + GELU_K * xv ** 3))
        out = 0.5 * xv * (1.0 + t)

        def vjp(g):
            dt = (1.0 - t * t) * GELU_C * (1.0 + 3.0 * GELU_K * xv * xv)
            return (g * (0.5 * (1.0 + t) + 0.5 * xv * dt),)

        return self._record("gelu", (x,), out, vjp)

    # ============ LINEAR ALGEBRA ============

    def matmul(self, a: Node, b: Node) -> Node:
        """numpy matmul semantics over leading (batch) axes"""
        av, bv = a.value, b.value
        if av.ndim < 2 or bv.ndim < 2:
            raise ShapeError(f"matmul needs >= 2-D operands, got {av.shape} and {bv.shape}")
        if av.shape[-1] != bv.shape[-2]:
            raise ShapeError(f"matmul: {av.shape} x {bv.shape} (inner dims differ)")

        def vjp(g):
            ga = np.matmul(g, _swap(bv))
            gb = np.matmul(_swap(av), g)
            return _unbroadcast(ga, av.shape), _unbroadcast(gb, bv.shape)

        return self._record("matmul", (a, b), np.matmul(av, bv), vjp)

    def transpose(self, a: Node) -> Node:
        """Swap the last two axes"""
        return self._record("transpose", (a,), _swap(a.value).copy(), lambda g: (_swap(g),))

    def softmax_rows(self, x: Node, scale: float = 1.0) -> Node:
        """Softmax over the last axis of x / scale"""
        y = _softmax_rows(x.value, scale)

        def vjp(g):
            inner = np.sum(g * y, axis=-1, keepdims=True)
            return (y * (g - inner) / scale,)

        return self._record("softmax_rows", (x,), y, vjp)

    def layer_norm(self, x: Node, gamma: Node, beta: Node, eps: float = LAYER_NORM_EPS) -> Node:
        """Normalize the last axis, then scale by gamma and shift by beta"""
        xv = x.value
        mu = xv.mean(axis=-1, keepdims=True)
        centered = xv - mu
        inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
        xhat = centered * inv_std
        gv = gamma.value

        def vjp(g):
            gxhat = g * gv
            gx = inv_std * (
                gxhat
                - gxhat.mean(axis=-1, keepdims=True)
                - xhat * (gxhat * xhat).mean(axis=-1, keepdims=True)
            )
            return gx, _unbroadcast(g * xhat, gv.shape), _unbroadcast(g, beta.value.shape)

        return self._record("layer_norm", (x, gamma, beta), xhat * gv + beta.value, vjp)

    def poly_filter(
        self,
        a: Node,
        v: Node,
        coeffs: Node,
        basis: PolynomialBasis,
        order: int
    ) -> Node:
        """
        Σ_k c_k P_k(A) V with the basis recurrence run on value blocks

        The adjoint walks the recurrence backwards: with Ḡ_k = c_k G,
        for k = j..1
            dA      += α_k Ḡ_k P_(k-1)ᵀ
            Ḡ_(k-1) += α_k Aᵀ Ḡ_k + β_k Ḡ_k
            Ḡ_(k-2) -= γ_k Ḡ_k
        and finally dV = Ḡ_0, dc_k = <G, P_k V>.
        """
        av, cv = a.value, coeffs.value
        if cv.shape != (order + 1,):
            raise ShapeError(f"poly_filter of order {order} needs {order + 1} coefficients, got {cv.shape}")
        terms = basis.apply_terms(av, v.value, order)
        out = combine_terms(terms, cv)

        def vjp(g):
            bars = [c * g for c in cv]
            grad_a = np.zeros(np.broadcast_shapes(av.shape[:-2], g.shape[:-2]) + av.shape[-2:])
            a_t = _swap(av)
            for k in range(order, 0, -1):
                alpha, beta, gamma = basis.recurrence(k)
                grad_a = grad_a + alpha * np.matmul(bars[k], _swap(terms[k - 1]))
                bars[k - 1] = bars[k - 1] + alpha * np.matmul(a_t, bars[k])
                if beta != 0.0:
                    bars[k - 1] = bars[k - 1] + beta * bars[k]
                if k > 1 and gamma != 0.0:
                    bars[k - 2] = bars[k - 2] - gamma * bars[k]
            grad_c = np.array([np.sum(g * term) for term in terms])
            return (
                _unbroadcast(grad_a, av.shape),
                _unbroadcast(bars[0], v.value.shape),
                grad_c
            )

        return self._record("poly_filter", (a, v, coeffs), out, vjp)

    # ============ INDEXING / SHAPE ============

    def gather(self, table: Node, indices: np.ndarray) -> Node:
        """Row lookup table[indices] (embedding)"""
        idx = np.asarray(indices, dtype=np.int64)
        tv = table.value

        def vjp(g):
            gt = np.zeros_like(tv)
            np.add.at(gt, idx, g)
            return (gt,)

        return self._record("gather", (table,), tv[idx], vjp)

    def concat(self, nodes: Sequence[Node], axis: int = -1) -> Node:
        values = [n.value for n in nodes]
        out = np.concatenate(values, axis=axis)
        bounds = np.cumsum([v.shape[axis] for v in values])[:-1]

        def vjp(g):
            return tuple(np.split(g, bounds, axis=axis))

        return self._record("concat", tuple(nodes), out, vjp)

    def slice(self, x: Node, start: int, stop: int, axis: int = -1) -> Node:
        """x[start:stop] along one axis"""
        xv = x.value
        index = [slice(None)] * xv.ndim
        index[axis] = slice(start, stop)
        index = tuple(index)

        def vjp(g):
            gx = np.zeros_like(xv)
            gx[index] = g
            return (gx,)

        return self._record("slice", (x,), xv[index].copy(), vjp)

    def reshape(self, x: Node, shape: Tuple[int, ...]) -> Node:
        xv = x.value
        return self._record("reshape", (x,), xv.reshape(shape), lambda g: (g.reshape(xv.shape),))

    # ============ REDUCTIONS ============

    def mean_axis(self, x: Node, axis: int) -> Node:
        xv = x.value
        size = xv.shape[axis]
        return self._record(
            "mean_axis", (x,), xv.mean(axis=axis),
            lambda g: (np.broadcast_to(np.expand_dims(g, axis) / size, xv.shape).copy(),)
        )

    def sum_axis(self, x: Node, axis: int) -> Node:
        xv = x.value
        return self._record(
            "sum_axis", (x,), xv.sum(axis=axis),
            lambda g: (np.broadcast_to(np.expand_dims(g, axis), xv.shape).copy(),)
        )

    def sum(self, x: Node) -> Node:
        """Scalar sum of all entries"""
        xv = x.value
        return self._record("sum", (x,), np.array(xv.sum()), lambda g: (np.full_like(xv, float(g)),))

    def cross_entropy(
        self,
        logits: Node,
        labels: np.ndarray,
        weights: Optional[np.ndarray] = None,
        normalizer: Optional[float] = None
    ) -> Node:
        """
        Σ_i w_i · (−log softmax(logits_i)[label_i]) / normalizer

        Args:
            logits: (N, C)
            labels: (N,) integer classes
            weights: (N,) per-row weights (default 1)
            normalizer: Divisor (default N)
        """
        z = logits.value
        labels = np.asarray(labels, dtype=np.int64)
        n = z.shape[0]
        w = np.ones(n) if weights is None else np.asarray(weights, dtype=np.float64)
        norm = float(n if normalizer is None else normalizer)
        if norm <= 0:
            raise ContractError(f"cross_entropy normalizer must be positive, got {norm}")

        shifted = z - z.max(axis=-1, keepdims=True)
        log_probs = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
        rows = np.arange(n)
        value = -np.sum(w * log_probs[rows, labels]) / norm

        def vjp(g):
            grad = np.exp(log_probs)
            grad[rows, labels] -= 1.0
            return (float(g) * grad * (w / norm)[:, None],)

        return self._record("cross_entropy", (logits,), np.array(value), vjp)

    def squared_error(
        self,
        pred: Node,
        target: np.ndarray,
        weights: Optional[np.ndarray] = None,
        normalizer: Optional[float] = None
    ) -> Node:
        """Σ w (pred − target)² / normalizer (default: entry count)"""
        pv = pred.value
        target = np.asarray(target, dtype=np.float64).reshape(pv.shape)
        w = np.ones_like(pv) if weights is None else np.asarray(weights, dtype=np.float64).reshape(pv.shape)
        norm = float(pv.size if normalizer is None else normalizer)
        if norm <= 0:
            raise ContractError(f"squared_error normalizer must be positive, got {norm}")
        diff = pv - target
        value = np.sum(w * diff * diff) / norm
        return self._record(
            "squared_error", (pred,), np.array(value),
            lambda g: (float(g) * 2.0 * w * diff / norm,)
        )

    # ============ BACKWARD ============

    def backward(self, loss: Node) -> Dict[str, np.ndarray]:
        """
        Reverse accumulation from a scalar loss

        Returns:
            dict: parameter name -> gradient (zeros for unreached params)

        Raises:
            ContractError: If loss is not a scalar
        """
        if loss.value.size != 1:
            raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")

        grads: Dict[int, np.ndarray] = {loss.id: np.ones_like(loss.value)}
        for node in reversed(self.nodes[: loss.id + 1]):
            g = grads.pop(node.id, None) if node.op != "param" else grads.get(node.id)
            if g is None or node.vjp is None:
                continue
            for input_id, input_grad in zip(node.inputs, node.vjp(g)):
                if input_grad is None:
                    continue
                if input_id in grads:
                    grads[input_id] = grads[input_id] + input_grad
                else:
                    grads[input_id] = input_grad

        return {
            name: grads.get(node.id, np.zeros_like(node.value)).reshape(node.value.shape)
            for name, node in self.params.items()
        }
