# ---
# File: ctgc/graph/models.py
# Purpose: Graph-core records: the original graph, its normalized operators,
#          and the link-prediction split.
# ---

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy import sparse

from ctgc.errors import InvalidValue, NotSymmetric, ShapeMismatch

SYMMETRY_TOL = 1e-9


class OperatorKind(str, Enum):
    GCN_ADJACENCY = "gcn-adjacency"
    LAPLACIAN = "laplacian"


def _as_csr(matrix) -> sparse.csr_matrix:
    if sparse.issparse(matrix):
        return sparse.csr_matrix(matrix, dtype=np.float64)
    return sparse.csr_matrix(np.asarray(matrix, dtype=np.float64))


def asymmetry(matrix: sparse.csr_matrix) -> float:
    diff = abs(matrix - matrix.T)
    return float(diff.max()) if diff.nnz else 0.0


class SparseGraph(BaseModel):
    """
    Undirected graph with CSR adjacency (64-bit weights), dense 32-bit
    node features and optional evaluation-only class labels.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    adjacency: sparse.csr_matrix
    features: np.ndarray
    labels: Optional[np.ndarray] = None

    @field_validator("adjacency", mode="before")
    @classmethod
    def _coerce_adjacency(cls, value):
        return _as_csr(value)

    @field_validator("features", mode="before")
    @classmethod
    def _coerce_features(cls, value):
        features = np.asarray(value, dtype=np.float32)
        if features.ndim != 2:
            raise ShapeMismatch("Features must be an n×d matrix", {"ndim": features.ndim})
        if not np.all(np.isfinite(features)):
            raise InvalidValue("Non-finite feature value")
        return features

    @field_validator("labels", mode="before")
    @classmethod
    def _coerce_labels(cls, value):
        if value is None:
            return None
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def _check_invariants(self):
        if self.adjacency.shape != (self.n, self.n):
            raise ShapeMismatch("Adjacency shape differs from node count", {"n": self.n, "shape": self.adjacency.shape})
        if self.features.shape[0] != self.n:
            raise ShapeMismatch("Feature rows differ from node count", {"n": self.n, "rows": self.features.shape[0]})
        if self.adjacency.nnz and self.adjacency.data.min() < 0:
            raise InvalidValue("Negative edge weight", {"min_weight": float(self.adjacency.data.min())})
        gap = asymmetry(self.adjacency)
        if gap > SYMMETRY_TOL:
            raise NotSymmetric("Adjacency is not symmetric", {"max_asymmetry": gap})
        if self.labels is not None:
            if self.labels.shape[0] != self.n:
                raise ShapeMismatch("Label count differs from node count", {"n": self.n, "labels": self.labels.shape[0]})
            if self.labels.size and self.labels.min() < 0:
                raise InvalidValue("Negative class label", {"min_label": int(self.labels.min())})
        return self

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def num_classes(self) -> int:
        if self.labels is None or self.labels.size == 0:
            return 0
        return int(self.labels.max()) + 1

    @property
    def edge_count(self) -> int:
        return int(sparse.triu(self.adjacency).nnz)

    # ---
    # Undirected edge list as an m×2 array with u < v (self-loops as u == v),
    # sorted lexicographically.
    # ---
    def edges(self) -> np.ndarray:
        upper = sparse.triu(self.adjacency).tocoo()
        pairs = np.stack([upper.row, upper.col], axis=1).astype(np.int64)
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        return pairs[order]

    def edge_weights(self) -> np.ndarray:
        upper = sparse.triu(self.adjacency).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return upper.data[order]

    def without_labels(self) -> "SparseGraph":
        return SparseGraph(n=self.n, adjacency=self.adjacency, features=self.features, labels=None)


class NormalizedOperator(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: OperatorKind
    matrix: sparse.csr_matrix

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        return _as_csr(value)

    @model_validator(mode="after")
    def _check_invariants(self):
        gap = asymmetry(self.matrix)
        if gap > SYMMETRY_TOL:
            raise NotSymmetric("Normalized operator is not symmetric", {"max_asymmetry": gap})
        if self.kind == OperatorKind.GCN_ADJACENCY and self.matrix.nnz and self.matrix.data.min() < 0:
            raise InvalidValue("GCN operator has negative entries")
        return self

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


class LinkSplit(BaseModel):
    """
    Link-prediction split. Positive and negative link sets are k×2 arrays of
    node pairs (u < v); the message graph has every val/test edge removed.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    train_links: np.ndarray
    val_links: np.ndarray
    test_links: np.ndarray
    train_negatives: np.ndarray
    val_negatives: np.ndarray
    test_negatives: np.ndarray
    message_graph: SparseGraph
    seed: int
