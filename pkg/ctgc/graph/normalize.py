# ---
# File: ctgc/graph/normalize.py
# Purpose: Symmetric normalization. The GCN operator adds self-loops
#          (D̃^-1/2 (A+I) D̃^-1/2); the Laplacian uses the raw adjacency
#          (I - D^-1/2 A D^-1/2). Degree-zero rows get a D^-1/2 entry of 0.
# ---

import numpy as np
from scipy import sparse

from ctgc.graph.models import NormalizedOperator, OperatorKind, SparseGraph


def inverse_sqrt_degree(adjacency) -> np.ndarray:
    degree = np.asarray(adjacency.sum(axis=1)).reshape(-1).astype(np.float64)
    inv = np.zeros_like(degree)
    positive = degree > 0
    inv[positive] = 1.0 / np.sqrt(degree[positive])
    return inv


def gcn_operator(adjacency) -> sparse.csr_matrix:
    a = sparse.csr_matrix(adjacency, dtype=np.float64)
    a_tilde = a + sparse.identity(a.shape[0], dtype=np.float64, format="csr")
    scale = sparse.diags(inverse_sqrt_degree(a_tilde))
    return sparse.csr_matrix(scale @ a_tilde @ scale)


def laplacian_operator(adjacency) -> sparse.csr_matrix:
    a = sparse.csr_matrix(adjacency, dtype=np.float64)
    scale = sparse.diags(inverse_sqrt_degree(a))
    return sparse.csr_matrix(sparse.identity(a.shape[0], dtype=np.float64, format="csr") - scale @ a @ scale)


def normalize(graph: SparseGraph, kind: OperatorKind) -> NormalizedOperator:
    kind = OperatorKind(kind)
    if kind == OperatorKind.GCN_ADJACENCY:
        matrix = gcn_operator(graph.adjacency)
    else:
        matrix = laplacian_operator(graph.adjacency)
    # Float round-off in the two-sided scaling can leave ~1e-17 asymmetry
    matrix = sparse.csr_matrix((matrix + matrix.T) * 0.5)
    matrix.eliminate_zeros()
    return NormalizedOperator(kind=kind, matrix=matrix)


# ---
# Dense GCN normalization for the condensed graph, whose adjacency is a
# small dense matrix.
# ---
def gcn_normalize_dense(adjacency: np.ndarray) -> np.ndarray:
    a_tilde = np.asarray(adjacency, dtype=np.float64) + np.eye(adjacency.shape[0])
    inv = inverse_sqrt_degree(a_tilde)
    return inv[:, None] * a_tilde * inv[None, :]
