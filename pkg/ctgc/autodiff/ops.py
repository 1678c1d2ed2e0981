# ---
# File: ctgc/autodiff/ops.py
# Purpose: Differentiable op set (forward value + backward rule) used by the
#          relay models, contrastive losses, inversion objectives and heads.
# ---

from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.special import expit, logsumexp

from ctgc.autodiff.tensor import Tensor, as_tensor, record
from ctgc.errors import ShapeMismatch

COSINE_EPS = 1e-12


# ---
# Broadcasting is limited to what the models need: identical shapes, a
# (1, d) row vector against (n, d), or a scalar against anything.
# ---
def _check_broadcast(op: str, a: Tensor, b: Tensor) -> None:
    sa, sb = a.shape, b.shape
    if sa == sb or a.size == 1 or b.size == 1:
        return
    if len(sa) == 2 and len(sb) == 2 and sa[1] == sb[1] and (sa[0] == 1 or sb[0] == 1):
        return
    raise ShapeMismatch(f"Incompatible shapes for '{op}'", {"left": sa, "right": sb})


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    if len(shape) == 0 or int(np.prod(shape)) == 1:
        return np.sum(grad).reshape(shape)
    return np.sum(grad, axis=0, keepdims=True).reshape(shape)


def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast("add", a, b)
    return record(
        "add", a.values + b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast("sub", a, b)
    return record(
        "sub", a.values - b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a, b) -> Tensor:
    """Elementwise (Hadamard) product."""
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast("mul", a, b)
    return record(
        "mul", a.values * b.values, (a, b),
        lambda g: (_unbroadcast(g * b.values, a.shape), _unbroadcast(g * a.values, b.shape)),
    )


def scale(a, factor: float) -> Tensor:
    a = as_tensor(a)
    return record("scale", a.values * factor, (a,), lambda g: (g * factor,))


def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    if a.values.ndim != 2 or b.values.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatch("Incompatible shapes for 'matmul'", {"left": a.shape, "right": b.shape})
    return record(
        "matmul", a.values @ b.values, (a, b),
        lambda g: (g @ b.values.T, a.values.T @ g),
    )


def spmm(matrix, x) -> Tensor:
    """CSR (or dense constant) operator times a tensor; the operator is not differentiated."""
    x = as_tensor(x)
    if matrix.shape[1] != x.shape[0]:
        raise ShapeMismatch("Incompatible shapes for 'spmm'", {"operator": matrix.shape, "right": x.shape})
    transposed = matrix.T.tocsr() if sparse.issparse(matrix) else np.asarray(matrix).T
    return record(
        "spmm", np.asarray(matrix @ x.values), (x,),
        lambda g: (np.asarray(transposed @ g),),
    )


def transpose(a) -> Tensor:
    a = as_tensor(a)
    return record("transpose", a.values.T.copy(), (a,), lambda g: (g.T,))


def relu(a) -> Tensor:
    a = as_tensor(a)
    mask = a.values > 0.0
    return record("relu", np.where(mask, a.values, 0.0), (a,), lambda g: (g * mask,))


def sigmoid(a) -> Tensor:
    a = as_tensor(a)
    s = expit(a.values)
    return record("sigmoid", s, (a,), lambda g: (g * s * (1.0 - s),))


def sin(a) -> Tensor:
    a = as_tensor(a)
    return record("sin", np.sin(a.values), (a,), lambda g: (g * np.cos(a.values),))


def cos(a) -> Tensor:
    a = as_tensor(a)
    return record("cos", np.cos(a.values), (a,), lambda g: (-g * np.sin(a.values),))


def log(a) -> Tensor:
    a = as_tensor(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.log(a.values)
    return record("log", values, (a,), lambda g: (g / a.values,))


def exp(a) -> Tensor:
    a = as_tensor(a)
    with np.errstate(over="ignore"):
        values = np.exp(a.values)
    return record("exp", values, (a,), lambda g: (g * values,))


def concat_rows(tensors: Sequence[Tensor]) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    widths = {t.shape[1] for t in tensors}
    if len(widths) != 1:
        raise ShapeMismatch("concat_rows needs equal column counts", {"widths": sorted(widths)})
    bounds = np.cumsum([0] + [t.shape[0] for t in tensors])

    def _backward(g):
        return tuple(g[bounds[i]:bounds[i + 1]] for i in range(len(tensors)))

    return record("concat_rows", np.vstack([t.values for t in tensors]), tuple(tensors), _backward)


def row_l2_normalize(a, eps: float = COSINE_EPS) -> Tensor:
    a = as_tensor(a)
    norms = np.sqrt(np.sum(a.values ** 2, axis=1, keepdims=True))
    denom = np.maximum(norms, eps)
    y = a.values / denom
    active = norms > eps

    def _backward(g):
        projected = (g - y * np.sum(g * y, axis=1, keepdims=True)) / denom
        return (np.where(active, projected, g / eps),)

    return record("row_l2_normalize", y, (a,), _backward)


def cosine_similarity_matrix(p, q, eps: float = COSINE_EPS) -> Tensor:
    """(a×d, b×d) -> a×b matrix of cosine similarities with an ε-guard on norms."""
    p, q = as_tensor(p), as_tensor(q)
    if p.shape[1] != q.shape[1]:
        raise ShapeMismatch("cosine similarity needs equal widths", {"left": p.shape, "right": q.shape})
    return matmul(row_l2_normalize(p, eps), transpose(row_l2_normalize(q, eps)))


def sum(a, axis: Optional[int] = None) -> Tensor:
    """Sum over all entries (scalar result) or over one axis (dims kept)."""
    a = as_tensor(a)
    if axis is None:
        return record("sum", np.sum(a.values), (a,), lambda g: (np.broadcast_to(g, a.shape).copy(),))
    return record(
        "sum", np.sum(a.values, axis=axis, keepdims=True), (a,),
        lambda g: (np.broadcast_to(g, a.shape).copy(),),
    )


def mean(a) -> Tensor:
    a = as_tensor(a)
    size = a.size
    return record("mean", np.mean(a.values), (a,), lambda g: (np.full(a.shape, float(g) / size),))


def mse(a, target) -> Tensor:
    """mean((a - target)^2)"""
    a, target = as_tensor(a), as_tensor(target)
    if a.shape != target.shape:
        raise ShapeMismatch("mse needs equal shapes", {"left": a.shape, "right": target.shape})
    diff = a.values - target.values
    size = diff.size
    return record(
        "mse", np.mean(diff ** 2), (a, target),
        lambda g: (2.0 * float(g) * diff / size, -2.0 * float(g) * diff / size),
    )


def norm(a) -> Tensor:
    """Frobenius norm; the gradient at the origin is taken as zero."""
    a = as_tensor(a)
    value = float(np.sqrt(np.sum(a.values ** 2)))

    def _backward(g):
        if value == 0.0:
            return (np.zeros_like(a.values),)
        return (float(g) * a.values / value,)

    return record("norm", np.array(value), (a,), _backward)


def bce_with_logits(logits, targets) -> Tensor:
    """Mean binary cross-entropy on raw scores; targets are constants in {0, 1}."""
    logits = as_tensor(logits)
    t = np.asarray(targets, dtype=np.float64).reshape(logits.shape)
    x = logits.values
    values = np.logaddexp(0.0, x) - t * x
    size = x.size
    return record(
        "bce_with_logits", np.mean(values), (logits,),
        lambda g: (float(g) * (expit(x) - t) / size,),
    )


def cross_entropy(logits, labels) -> Tensor:
    """Mean softmax cross-entropy of n×C scores against integer labels."""
    logits = as_tensor(logits)
    labels = np.asarray(labels, dtype=np.int64)
    if logits.values.ndim != 2 or labels.shape[0] != logits.shape[0]:
        raise ShapeMismatch("cross_entropy needs n×C logits and n labels", {"logits": logits.shape, "labels": labels.shape})
    x = logits.values
    log_probs = x - logsumexp(x, axis=1, keepdims=True)
    n = x.shape[0]
    rows = np.arange(n)

    def _backward(g):
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        return (float(g) * grad / n,)

    return record("cross_entropy", -np.mean(log_probs[rows, labels]), (logits,), _backward)
