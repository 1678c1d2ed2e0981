# ---
# File: ctgc/condensation/models.py
# Purpose: Records of the contrastive condensation stage: cluster assignments,
#          hyperparameters, per-phase training records and the final state.
# ---

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ctgc.errors import InvalidValue, ShapeMismatch
from ctgc.relay.models import Architecture, EigenMlpParams, GcnParams


class Phase(str, Enum):
    SEMANTIC = "semantic"
    STRUCTURAL = "structural"


class ClusterAssignment(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float = Field(ge=0)
    history: list[float] = Field(default_factory=list)

    @field_validator("labels", mode="before")
    @classmethod
    def _coerce_labels(cls, value):
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def _check_labels(self):
        k = self.centroids.shape[0]
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= k):
            raise InvalidValue("Cluster label outside [0, k)", {"k": k})
        return self

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])


class CondenseConfig(BaseModel):
    """
    Hyperparameters of relay training and alternating optimization.

    pretrain / structural switch off the shuffle pretraining and the
    structural branch for ablation runs.
    """

    n_prime: int = Field(ge=2)
    tau: float = Field(gt=0)
    alpha: float = Field(ge=0)
    m_pre: int = Field(ge=1)
    m_train: int = Field(ge=1)
    k_iter: int = Field(ge=1)
    lr_pre: float = Field(gt=0)
    lr_sem: float = Field(gt=0)
    lr_str: float = Field(gt=0)
    seed: int = Field(default=0, ge=0)
    hidden_dim: int = Field(default=256, ge=1)
    emb_dim: int = Field(default=256, ge=1)
    period: int = Field(default=16, ge=1)
    arch: Architecture = Architecture.GCN
    pretrain: bool = True
    structural: bool = True


class PhaseRecord(BaseModel):
    iteration: int
    phase: Phase
    loss: float
    matching_rate: float
    step_losses: list[float] = Field(default_factory=list)

    def log_line(self) -> dict:
        return {
            "iter": self.iteration,
            "phase": self.phase.value,
            "loss": self.loss,
            "matching_rate": self.matching_rate,
        }


class CondensationState(BaseModel):
    """
    Output of alternating optimization at the selected (lowest total loss)
    iteration. Histories cover every iteration that ran.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h_cent: np.ndarray
    z_cent: Optional[np.ndarray] = None
    y_h: np.ndarray
    y_z: np.ndarray
    matching_rate_history: list[float]
    total_losses: list[float]
    phases: list[PhaseRecord] = Field(default_factory=list)
    selected_iteration: int = Field(ge=1)

    @field_validator("h_cent", "z_cent", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        if value is None:
            return None
        return np.asarray(value, dtype=np.float64)

    @field_validator("y_h", "y_z", mode="before")
    @classmethod
    def _coerce_labels(cls, value):
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def _check_invariants(self):
        for name in ("h_cent", "z_cent"):
            matrix = getattr(self, name)
            if matrix is not None and not np.all(np.isfinite(matrix)):
                raise InvalidValue("Non-finite centroid embeddings", {"field": name})
        if self.z_cent is not None and self.z_cent.shape != self.h_cent.shape:
            raise ShapeMismatch("H′ and Z′ shapes differ", {"h_cent": self.h_cent.shape, "z_cent": self.z_cent.shape})
        if len(self.matching_rate_history) != len(self.total_losses):
            raise ShapeMismatch("History lengths differ")
        return self

    @property
    def n_prime(self) -> int:
        return int(self.h_cent.shape[0])


class CondensationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    state: CondensationState
    semantic: GcnParams
    structural: Optional[EigenMlpParams] = None
