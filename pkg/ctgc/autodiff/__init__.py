# ---
# File: ctgc/autodiff/__init__.py
# Purpose: Public surface of the reverse-mode differentiation engine
# ---

from ctgc.autodiff.gradcheck import grad_check
from ctgc.autodiff.optim import AdamState, adam_step, zero_grads
from ctgc.autodiff.tensor import Tape, Tensor, backward

__all__ = ["AdamState", "Tape", "Tensor", "adam_step", "backward", "grad_check", "zero_grads"]
