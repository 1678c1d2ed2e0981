# ---
# File: ctgc/autodiff/gradcheck.py
# Purpose: Central finite-difference check of autodiff gradients.
# ---

from typing import Callable

import numpy as np

from ctgc.autodiff.tensor import Tape, Tensor, backward
from ctgc.errors import InvalidConfig


# ---
# Compare the autodiff gradient of a scalar expression f at x against
# (f(x+h) - f(x-h)) / 2h per coordinate. Returns the maximum relative error
# with denominator max(|a|, |b|, 1e-8).
# ---
def grad_check(f: Callable[[Tensor], Tensor], x: Tensor, h: float = 1e-5) -> float:
    if not 0.0 < h <= 1e-2:
        raise InvalidConfig("Finite-difference step must lie in (0, 1e-2]", {"h": h})

    leaf = Tensor(x.values, requires_grad=True)
    with Tape() as tape:
        out = f(leaf)
    backward(tape, out)
    analytic = leaf.grad

    numeric = np.zeros_like(x.values)
    base = x.values.copy()
    for index in np.ndindex(base.shape):
        shifted = base.copy()
        shifted[index] = base[index] + h
        upper = f(Tensor(shifted)).item()
        shifted[index] = base[index] - h
        lower = f(Tensor(shifted)).item()
        numeric[index] = (upper - lower) / (2.0 * h)

    denominator = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denominator)) if analytic.size else 0.0
