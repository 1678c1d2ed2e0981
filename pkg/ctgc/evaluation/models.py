# ---
# File: ctgc/evaluation/models.py
# Purpose: Evaluation settings, few-shot splits and the JSON report
# ---

from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ctgc.errors import InvalidValue
from ctgc.relay.models import Architecture


class Task(str, Enum):
    NC = "nc"
    LP = "lp"
    CL = "cl"


class Variant(str, Enum):
    FULL = "full"
    W_KNN = "w-knn"
    WO_LCEN = "wo-lcen"
    WO_INIT = "wo-init"
    WO_ITER = "wo-iter"
    WO_STR = "wo-str"


class FewShotSplit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    shots: int = Field(ge=1)
    train_ids: np.ndarray
    test_ids: np.ndarray

    @model_validator(mode="after")
    def _check_disjoint(self):
        if np.intersect1d(self.train_ids, self.test_ids).size:
            raise InvalidValue("Few-shot train and test ids overlap")
        return self


class EvalConfig(BaseModel):
    """Downstream training and head settings; unstated defaults are flagged in DESIGN.md."""

    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    shots: list[int] = Field(default_factory=lambda: [3, 5], min_length=1)
    tasks: list[Task] = Field(default_factory=lambda: [Task.NC, Task.LP, Task.CL], min_length=1)
    arch: Architecture = Architecture.GCN
    hidden_dim: int = Field(default=256, ge=1)
    downstream_epochs: int = Field(default=300, ge=0)
    downstream_lr: float = Field(default=0.01, gt=0)
    head_epochs: int = Field(default=300, ge=1)
    head_lr: float = Field(default=0.01, gt=0)
    lp_eval_every: int = Field(default=10, ge=1)


class TaskSummary(BaseModel):
    mean: float
    std: float = Field(ge=0)
    per_seed: list[float]

    @field_validator("per_seed")
    @classmethod
    def _check_unit_interval(cls, values):
        if any(v < 0.0 or v > 1.0 for v in values):
            raise InvalidValue("Scores must lie in [0, 1]", {"per_seed": values})
        return values

    @classmethod
    def from_scores(cls, scores: list[float]) -> "TaskSummary":
        values = [float(s) for s in scores]
        return cls(mean=float(np.mean(values)), std=float(np.std(values)), per_seed=values)


class EvalReport(BaseModel):
    """
    JSON layout: {"nc": {"3": {mean, std, per_seed}, "5": {...}},
    "lp": {...}, "cl": {...}, "seeds": [...], "config": {...}}.
    Tasks that were not requested are omitted.
    """

    nc: Optional[dict[str, TaskSummary]] = None
    lp: Optional[TaskSummary] = None
    cl: Optional[TaskSummary] = None
    seeds: list[int]
    config: dict[str, Any] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)

    def nc_mean(self, shots: int) -> float:
        return self.nc[str(shots)].mean
