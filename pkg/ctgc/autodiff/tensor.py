# ---
# File: ctgc/autodiff/tensor.py
# Purpose: Dense 64-bit tensors and the dynamic tape that records executed ops
#          for reverse-mode differentiation. A fresh Tape is opened per
#          optimization step; ops executed outside a tape are forward-only.
# ---

from contextvars import ContextVar
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ctgc.errors import InvalidRoot, NumericalOverflow, ShapeMismatch

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_active_tape: ContextVar[Optional["Tape"]] = ContextVar("ctgc_active_tape", default=None)


class Tensor:
    """
    Two-dimensional (or scalar) float64 value with an optional gradient buffer.

    Leaves created with requires_grad=True own a zero-initialized `grad`
    buffer that backward() accumulates into. Tensors produced by ops are
    intermediates: they never carry a buffer of their own.
    """

    __array_priority__ = 100

    def __init__(self, values, requires_grad: bool = False, name: Optional[str] = None):
        self.values = np.array(values, dtype=np.float64)
        if not np.all(np.isfinite(self.values)):
            raise NumericalOverflow("Non-finite values in tensor", {"name": name})
        self.requires_grad = requires_grad
        self.name = name
        self.is_leaf = True
        self.grad: Optional[np.ndarray] = np.zeros_like(self.values) if requires_grad else None

    @classmethod
    def _intermediate(cls, values: np.ndarray, requires_grad: bool) -> "Tensor":
        out = cls.__new__(cls)
        out.values = values
        out.requires_grad = requires_grad
        out.name = None
        out.is_leaf = False
        out.grad = None
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def size(self) -> int:
        return int(self.values.size)

    def item(self) -> float:
        if self.values.size != 1:
            raise ShapeMismatch("item() needs a single-element tensor", {"shape": self.shape})
        return float(self.values.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.values.copy()

    def zero_grad(self) -> None:
        if self.requires_grad and self.is_leaf:
            self.grad = np.zeros_like(self.values)

    def detach(self) -> "Tensor":
        return Tensor(self.values, requires_grad=False, name=self.name)

    def clone(self) -> "Tensor":
        return Tensor(self.values, requires_grad=self.requires_grad, name=self.name)

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}{flag})"

    # Operator sugar; the rules live in ctgc.autodiff.ops
    def __add__(self, other):
        from ctgc.autodiff import ops
        return ops.add(self, other)

    def __radd__(self, other):
        from ctgc.autodiff import ops
        return ops.add(other, self)

    def __sub__(self, other):
        from ctgc.autodiff import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from ctgc.autodiff import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from ctgc.autodiff import ops
        if np.isscalar(other):
            return ops.scale(self, float(other))
        return ops.mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        from ctgc.autodiff import ops
        return ops.scale(self, -1.0)

    def __matmul__(self, other):
        from ctgc.autodiff import ops
        return ops.matmul(self, other)

    def __rmatmul__(self, other):
        from ctgc.autodiff import ops
        return ops.matmul(other, self)

    def __truediv__(self, other):
        from ctgc.autodiff import ops
        if not np.isscalar(other):
            raise ShapeMismatch("Tensor division supports scalar divisors only")
        return ops.scale(self, 1.0 / float(other))


@dataclass
class TapeRecord:
    op: str
    out: Tensor
    inputs: tuple[Tensor, ...]
    backward: BackwardFn


class Tape:
    """
    Ordered record of executed ops. Use as a context manager so that ops
    executed inside the block are recorded:

        with Tape() as tape:
            loss = ops.sum(ops.mul(x, x))
        backward(tape, loss)
    """

    def __init__(self):
        self.records: list[TapeRecord] = []
        self._token = None

    def __enter__(self) -> "Tape":
        self._token = _active_tape.set(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _active_tape.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self.records)


def as_tensor(value) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value, requires_grad=False)


# ---
# Build the output tensor of an op, reject non-finite results, and record the
# backward rule on the active tape when any input participates in gradients.
# ---
def record(op: str, values: np.ndarray, inputs: Sequence[Tensor], backward_fn: BackwardFn) -> Tensor:
    if not np.all(np.isfinite(values)):
        raise NumericalOverflow(f"Non-finite output from op '{op}'", {"shape": np.shape(values)})
    needs_grad = any(t.requires_grad for t in inputs)
    out = Tensor._intermediate(np.asarray(values, dtype=np.float64), needs_grad)
    tape = _active_tape.get()
    if tape is not None and needs_grad:
        tape.records.append(TapeRecord(op, out, tuple(inputs), backward_fn))
    return out


# ---
# Reverse-mode sweep: visits records in exact reverse execution order and
# accumulates gradients additively into leaf buffers.
# ---
def backward(tape: Tape, root: Tensor) -> None:
    if root.values.size != 1:
        raise InvalidRoot("backward() needs a scalar root", {"shape": root.shape})
    pending: dict[int, np.ndarray] = {id(root): np.ones_like(root.values)}
    if root.is_leaf and root.requires_grad:
        root.grad = root.grad + pending.pop(id(root))
        return

    for rec in reversed(tape.records):
        upstream = pending.pop(id(rec.out), None)
        if upstream is None:
            continue
        for tensor, grad in zip(rec.inputs, rec.backward(upstream)):
            if grad is None or not tensor.requires_grad:
                continue
            if tensor.is_leaf:
                tensor.grad = tensor.grad + grad
            elif id(tensor) in pending:
                pending[id(tensor)] = pending[id(tensor)] + grad
            else:
                pending[id(tensor)] = grad
