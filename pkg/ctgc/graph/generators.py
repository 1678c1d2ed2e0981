# ---
# File: ctgc/graph/generators.py
# Purpose: Synthetic stochastic-block-model graphs (desk-scale test substrate)
#          and cosine k-nearest-neighbour graphs.
# ---

import logging
from typing import Sequence

import numpy as np
from scipy import sparse

from ctgc.errors import InvalidConfig
from ctgc.graph.models import SparseGraph

logger = logging.getLogger(__name__)

SBM_EXTRA_FEATURES = 8
KNN_EPS = 1e-12
KNN_CHUNK = 1024


def generate_sbm(
    block_sizes: Sequence[int],
    p_in: float,
    p_out: float,
    seed: int,
    noise_std: float = 0.5,
) -> SparseGraph:
    """
    Sample an undirected SBM. Labels are block ids; features are the one-hot
    block indicator padded with 8 zero columns, plus N(0, noise_std²) noise.

    Args:
        block_sizes: Node count of each block
        p_in: Edge probability inside a block
        p_out: Edge probability across blocks
        seed: Generator seed; output is deterministic given it

    Returns:
        SparseGraph with labels
    """
    block_sizes = [int(size) for size in block_sizes]
    if not block_sizes or any(size <= 0 for size in block_sizes):
        raise InvalidConfig("SBM needs at least one non-empty block", {"block_sizes": block_sizes})
    if not (0.0 <= p_out < p_in <= 1.0):
        raise InvalidConfig("SBM needs 0 <= p_out < p_in <= 1", {"p_in": p_in, "p_out": p_out})
    if noise_std < 0:
        raise InvalidConfig("noise_std must be nonnegative", {"noise_std": noise_std})

    rng = np.random.default_rng(seed)
    n = sum(block_sizes)
    starts = np.cumsum([0] + block_sizes)
    labels = np.repeat(np.arange(len(block_sizes)), block_sizes)

    rows, cols = [], []
    for a in range(len(block_sizes)):
        for b in range(a, len(block_sizes)):
            ia = np.arange(starts[a], starts[a + 1])
            ib = np.arange(starts[b], starts[b + 1])
            if a == b:
                u, v = np.triu_indices(ia.size, k=1)
                u, v = ia[u], ia[v]
                keep = rng.random(u.size) < p_in
            else:
                u, v = np.meshgrid(ia, ib, indexing="ij")
                u, v = u.reshape(-1), v.reshape(-1)
                keep = rng.random(u.size) < p_out
            rows.append(u[keep])
            cols.append(v[keep])

    r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    adjacency = sparse.csr_matrix(
        (np.ones(2 * r.size), (np.concatenate([r, c]), np.concatenate([c, r]))),
        shape=(n, n),
        dtype=np.float64,
    )

    features = np.zeros((n, len(block_sizes) + SBM_EXTRA_FEATURES))
    features[np.arange(n), labels] = 1.0
    features += rng.normal(0.0, noise_std, size=features.shape)

    graph = SparseGraph(n=n, adjacency=adjacency, features=features, labels=labels)
    logger.debug("[SBM] Generated | nodes: %d | edges: %d | blocks: %d", n, graph.edge_count, len(block_sizes))
    return graph


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors / np.maximum(norms, KNN_EPS)


# ---
# Symmetric 0/1 adjacency: edge (i, j) iff j is among the k most
# cosine-similar rows to i (self excluded), united over both directions.
# Equal similarities resolve to the lowest index.
# ---
def knn_graph(vectors: np.ndarray, k: int) -> sparse.csr_matrix:
    vectors = np.asarray(vectors, dtype=np.float64)
    n = vectors.shape[0]
    if not (1 <= k < n):
        raise InvalidConfig("knn_graph needs 1 <= k < n", {"k": k, "n": n})

    unit = _unit_rows(vectors)
    rows, cols = [], []
    for start in range(0, n, KNN_CHUNK):
        stop = min(start + KNN_CHUNK, n)
        sims = unit[start:stop] @ unit.T
        local = np.arange(stop - start)
        sims[local, start + local] = -np.inf
        nearest = np.argsort(-sims, axis=1, kind="stable")[:, :k]
        rows.append(np.repeat(np.arange(start, stop), k))
        cols.append(nearest.reshape(-1))

    r, c = np.concatenate(rows), np.concatenate(cols)
    directed = sparse.csr_matrix((np.ones(r.size), (r, c)), shape=(n, n), dtype=np.float64)
    union = directed.maximum(directed.T).tocsr()
    union.setdiag(0.0)
    union.eliminate_zeros()
    return union
