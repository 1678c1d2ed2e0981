# ---
# File: ctgc/generation/models.py
# Purpose: Condensed graph record and inversion settings/results
# ---

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ctgc.errors import InvalidValue, NotSymmetric, ShapeMismatch

ADJACENCY_TOL = 1e-12


class CondensedGraph(BaseModel):
    """
    Synthesized graph: dense weighted adjacency A′ (float64), attributes X′
    and proxy targets H′ (both float32, as stored on disk), plus provenance
    (config echo, seeds, inversion residuals).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    adjacency: np.ndarray
    features: np.ndarray
    proxy_labels: np.ndarray
    provenance: dict[str, Any] = Field(default_factory=dict)

    @field_validator("adjacency", mode="before")
    @classmethod
    def _coerce_adjacency(cls, value):
        return np.asarray(value, dtype=np.float64)

    @field_validator("features", "proxy_labels", mode="before")
    @classmethod
    def _coerce_float32(cls, value):
        return np.asarray(value, dtype=np.float32)

    @model_validator(mode="after")
    def _check_invariants(self):
        a = self.adjacency
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ShapeMismatch("Condensed adjacency must be square", {"shape": a.shape})
        n = a.shape[0]
        for name in ("features", "proxy_labels"):
            matrix = getattr(self, name)
            if matrix.ndim != 2 or matrix.shape[0] != n:
                raise ShapeMismatch("Condensed matrix rows differ from N′", {"field": name, "shape": matrix.shape, "n_prime": n})
            if not np.all(np.isfinite(matrix)):
                raise InvalidValue("Non-finite condensed values", {"field": name})
        if not np.all(np.isfinite(a)):
            raise InvalidValue("Non-finite condensed adjacency")
        if np.max(np.abs(a - a.T), initial=0.0) > ADJACENCY_TOL:
            raise NotSymmetric("Condensed adjacency is not symmetric")
        if np.any(np.diag(a) != 0.0):
            raise InvalidValue("Condensed adjacency has a nonzero diagonal")
        if np.any(a < 0.0):
            raise InvalidValue("Condensed adjacency has negative entries")
        return self

    @property
    def n_prime(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, k=1)))


class InversionConfig(BaseModel):
    steps: int = Field(default=2000, ge=0)
    lr: float = Field(default=0.01, gt=0)
    ortho_weight: float = Field(default=1.0, ge=0)
    threshold: float = Field(default=0.01, ge=0)
    seed: int = Field(default=0, ge=0)
    anneal: bool = True
    min_lr_ratio: float = Field(default=0.05, ge=0, le=1)


class InversionResult(BaseModel):
    """Best iterate of an inversion run with its objective trace."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    solution: np.ndarray
    objective: float
    history: list[float] = Field(default_factory=list)
    residuals: dict[str, float] = Field(default_factory=dict)
