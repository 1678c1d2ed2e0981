# ---
# File: ctgc/spectral/models.py
# Purpose: EigenSystem record: the K1 smallest and K2 largest Laplacian
#          eigenpairs consumed by the structural relay model.
# ---

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ctgc.errors import InvalidValue, ShapeMismatch

UNIT_NORM_TOL = 1e-8
SPECTRUM_SLACK = 1e-8


class EigenSystem(BaseModel):
    """
    Eigenpairs of a normalized Laplacian.

    eigenvalues holds the smallest band (k1 values, ascending) followed by
    the largest band (k2 values, ascending); column i of eigenvectors pairs
    with eigenvalue i. residuals[i] = ||L v_i - λ_i v_i||_2 when known.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    k1: int = Field(ge=0)
    k2: int = Field(ge=0)
    residuals: Optional[np.ndarray] = None

    @field_validator("eigenvalues", "residuals", mode="before")
    @classmethod
    def _coerce_vector(cls, value):
        if value is None:
            return None
        return np.asarray(value, dtype=np.float64).reshape(-1)

    @field_validator("eigenvectors", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        matrix = np.asarray(value, dtype=np.float64)
        if matrix.ndim != 2:
            raise ShapeMismatch("Eigenvectors must be an n×k matrix", {"ndim": matrix.ndim})
        return matrix

    @model_validator(mode="after")
    def _check_invariants(self):
        k = self.k1 + self.k2
        if self.eigenvalues.shape[0] != k or self.eigenvectors.shape[1] != k:
            raise ShapeMismatch(
                "Eigenpair count differs from k1 + k2",
                {"k1": self.k1, "k2": self.k2, "values": self.eigenvalues.shape[0], "vectors": self.eigenvectors.shape[1]},
            )
        if self.residuals is not None and self.residuals.shape[0] != k:
            raise ShapeMismatch("Residual count differs from k1 + k2", {"residuals": self.residuals.shape[0], "k": k})
        if k == 0:
            return self
        if not (np.all(np.isfinite(self.eigenvalues)) and np.all(np.isfinite(self.eigenvectors))):
            raise InvalidValue("Non-finite eigenpair")
        if self.eigenvalues.min() < -SPECTRUM_SLACK or self.eigenvalues.max() > 2.0 + SPECTRUM_SLACK:
            raise InvalidValue(
                "Eigenvalues outside the normalized Laplacian range [0, 2]",
                {"min": float(self.eigenvalues.min()), "max": float(self.eigenvalues.max())},
            )
        norms = np.linalg.norm(self.eigenvectors, axis=0)
        if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
            raise InvalidValue("Eigenvector columns are not unit norm", {"max_deviation": float(np.max(np.abs(norms - 1.0)))})
        for band in (self.smallest_values, self.largest_values):
            if band.size > 1 and np.any(np.diff(band) < -SPECTRUM_SLACK):
                raise InvalidValue("Eigenvalues not ascending within a band")
        return self

    @property
    def n(self) -> int:
        return int(self.eigenvectors.shape[0])

    @property
    def size(self) -> int:
        return self.k1 + self.k2

    @property
    def smallest_values(self) -> np.ndarray:
        return self.eigenvalues[: self.k1]

    @property
    def largest_values(self) -> np.ndarray:
        return self.eigenvalues[self.k1:]

    def orthonormality_error(self) -> float:
        k = self.size
        gram = self.eigenvectors.T @ self.eigenvectors
        return float(np.linalg.norm(np.eye(k) - gram))

    def flipped(self) -> "EigenSystem":
        """Same pairs with every eigenvector negated."""
        return self.model_copy(update={"eigenvectors": -self.eigenvectors})
