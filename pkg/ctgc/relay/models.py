# ---
# File: ctgc/relay/models.py
# Purpose: Parameter containers of the two relay models: the semantic GCN
#          (or its SGC variant) and the structural EigenMLP.
# ---

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ctgc.autodiff import Tensor
from ctgc.errors import InvalidValue, ShapeMismatch

DEFAULT_HIDDEN = 256
DEFAULT_EMBEDDING = 256
DEFAULT_PERIOD = 16


class Architecture(str, Enum):
    GCN = "gcn"
    SGC = "sgc"


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, name: str) -> Tensor:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return Tensor(rng.uniform(-limit, limit, size=(fan_in, fan_out)), requires_grad=True, name=name)


def zeros_row(width: int, name: str) -> Tensor:
    return Tensor(np.zeros((1, width)), requires_grad=True, name=name)


class _ParamsBase(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check_finite(self):
        for tensor in self.parameters():
            if not np.all(np.isfinite(tensor.values)):
                raise InvalidValue("Non-finite parameter", {"name": tensor.name})
        return self

    def parameters(self) -> list[Tensor]:
        raise NotImplementedError

    def zero_grad(self) -> None:
        for tensor in self.parameters():
            tensor.zero_grad()

    def freeze(self) -> None:
        for tensor in self.parameters():
            tensor.requires_grad = False
            tensor.grad = None

    def values(self) -> list[np.ndarray]:
        return [tensor.values.copy() for tensor in self.parameters()]

    def load_values(self, values: list[np.ndarray]) -> None:
        params = self.parameters()
        if len(values) != len(params):
            raise ShapeMismatch("Parameter count differs", {"expected": len(params), "got": len(values)})
        for tensor, value in zip(params, values):
            if tensor.values.shape != value.shape:
                raise ShapeMismatch("Parameter shape differs", {"name": tensor.name, "expected": tensor.shape, "got": value.shape})
            tensor.values[...] = value


class GcnParams(_ParamsBase):
    """
    Semantic relay model.

    gcn: H = Â · ReLU(Â X W1) · W2 (final layer linear)
    sgc: H = Â² X W1 (single linear layer over two propagation hops)
    """

    arch: Architecture = Architecture.GCN
    weights: list[Tensor] = Field(min_length=1, max_length=2)

    @model_validator(mode="after")
    def _check_layers(self):
        expected = 2 if self.arch == Architecture.GCN else 1
        if len(self.weights) != expected:
            raise ShapeMismatch("Layer count does not match architecture", {"arch": self.arch.value, "layers": len(self.weights)})
        if expected == 2 and self.weights[0].shape[1] != self.weights[1].shape[0]:
            raise ShapeMismatch("GCN layer widths do not chain", {"w1": self.weights[0].shape, "w2": self.weights[1].shape})
        return self

    @classmethod
    def initialize(
        cls,
        in_dim: int,
        seed: int,
        hidden_dim: int = DEFAULT_HIDDEN,
        emb_dim: int = DEFAULT_EMBEDDING,
        arch: Architecture = Architecture.GCN,
    ) -> "GcnParams":
        rng = np.random.default_rng(seed)
        arch = Architecture(arch)
        if arch == Architecture.SGC:
            return cls(arch=arch, weights=[glorot(rng, in_dim, emb_dim, "sgc.w")])
        return cls(
            arch=arch,
            weights=[glorot(rng, in_dim, hidden_dim, "gcn.w1"), glorot(rng, hidden_dim, emb_dim, "gcn.w2")],
        )

    @property
    def in_dim(self) -> int:
        return int(self.weights[0].shape[0])

    @property
    def emb_dim(self) -> int:
        return int(self.weights[-1].shape[1])

    def parameters(self) -> list[Tensor]:
        return list(self.weights)

    def clone(self) -> "GcnParams":
        return GcnParams(arch=self.arch, weights=[w.clone() for w in self.weights])


class EigenMlpParams(_ParamsBase):
    """
    Structural relay model.

    φ: N′ -> d_h -> d_h, ReLU, no bias on the first layer
    ψ: d_h -> d_h -> N′, ReLU
    W_ρ: 2T × d_emb over the Fourier eigenvalue features
    """

    period: int = Field(default=DEFAULT_PERIOD, ge=1)
    phi_w1: Tensor
    phi_w2: Tensor
    phi_b2: Tensor
    psi_w1: Tensor
    psi_b1: Tensor
    psi_w2: Tensor
    psi_b2: Tensor
    w_rho: Tensor

    @model_validator(mode="after")
    def _check_shapes(self):
        n_prime, hidden = self.phi_w1.shape
        expected = {
            "phi_w2": (hidden, hidden),
            "phi_b2": (1, hidden),
            "psi_w1": (hidden, hidden),
            "psi_b1": (1, hidden),
            "psi_w2": (hidden, n_prime),
            "psi_b2": (1, n_prime),
        }
        for field, shape in expected.items():
            if getattr(self, field).shape != shape:
                raise ShapeMismatch("EigenMLP parameter has the wrong shape", {"field": field, "expected": shape, "got": getattr(self, field).shape})
        if self.w_rho.shape[0] != 2 * self.period:
            raise ShapeMismatch("W_rho must have 2T rows", {"rows": self.w_rho.shape[0], "period": self.period})
        return self

    @classmethod
    def initialize(
        cls,
        n_prime: int,
        seed: int,
        hidden_dim: int = DEFAULT_HIDDEN,
        emb_dim: int = DEFAULT_EMBEDDING,
        period: int = DEFAULT_PERIOD,
    ) -> "EigenMlpParams":
        rng = np.random.default_rng(seed)
        return cls(
            period=period,
            phi_w1=glorot(rng, n_prime, hidden_dim, "phi.w1"),
            phi_w2=glorot(rng, hidden_dim, hidden_dim, "phi.w2"),
            phi_b2=zeros_row(hidden_dim, "phi.b2"),
            psi_w1=glorot(rng, hidden_dim, hidden_dim, "psi.w1"),
            psi_b1=zeros_row(hidden_dim, "psi.b1"),
            psi_w2=glorot(rng, hidden_dim, n_prime, "psi.w2"),
            psi_b2=zeros_row(n_prime, "psi.b2"),
            w_rho=glorot(rng, 2 * period, emb_dim, "rho.w"),
        )

    @property
    def n_prime(self) -> int:
        return int(self.phi_w1.shape[0])

    @property
    def emb_dim(self) -> int:
        return int(self.w_rho.shape[1])

    def parameters(self) -> list[Tensor]:
        return [
            self.phi_w1, self.phi_w2, self.phi_b2,
            self.psi_w1, self.psi_b1, self.psi_w2, self.psi_b2,
            self.w_rho,
        ]

    def clone(self) -> "EigenMlpParams":
        names = ["phi_w1", "phi_w2", "phi_b2", "psi_w1", "psi_b1", "psi_w2", "psi_b2", "w_rho"]
        return EigenMlpParams(period=self.period, **{name: getattr(self, name).clone() for name in names})
