# ---
# File: ctgc/autodiff/optim.py
# Purpose: Bias-corrected Adam. Parameters are updated in place between tapes;
#          the moment buffers live in AdamState so an optimizer can be resumed.
# ---

import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ctgc.autodiff.tensor import Tensor
from ctgc.errors import ShapeMismatch


class AdamState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    lr: float = Field(gt=0)
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = Field(default=0, ge=0)
    first_moments: list[np.ndarray] = Field(default_factory=list)
    second_moments: list[np.ndarray] = Field(default_factory=list)

    @classmethod
    def for_params(cls, params: Sequence[Tensor], lr: float) -> "AdamState":
        return cls(
            lr=lr,
            first_moments=[np.zeros_like(p.values) for p in params],
            second_moments=[np.zeros_like(p.values) for p in params],
        )


# ---
# One Adam update. `grads` defaults to the parameters' own accumulated
# buffers; parameters and moment buffers are modified in place.
# ---
def adam_step(
    params: Sequence[Tensor],
    grads: Optional[Sequence[np.ndarray]],
    state: AdamState,
) -> AdamState:
    if grads is None:
        grads = [p.grad for p in params]
    if not state.first_moments:
        state.first_moments = [np.zeros_like(p.values) for p in params]
        state.second_moments = [np.zeros_like(p.values) for p in params]
    if not (len(params) == len(grads) == len(state.first_moments)):
        raise ShapeMismatch(
            "Adam parameter/gradient/state counts differ",
            {"params": len(params), "grads": len(grads), "state": len(state.first_moments)},
        )

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    step_size = state.lr * math.sqrt(correction2) / correction1

    for param, grad, m, v in zip(params, grads, state.first_moments, state.second_moments):
        if grad.shape != param.values.shape:
            raise ShapeMismatch("Gradient shape differs from parameter", {"param": param.shape, "grad": grad.shape})
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        param.values -= step_size * m / (np.sqrt(v) + state.eps * math.sqrt(correction2))
    return state


def zero_grads(params: Sequence[Tensor]) -> None:
    for param in params:
        param.zero_grad()
