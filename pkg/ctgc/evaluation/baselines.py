# ---
# File: ctgc/evaluation/baselines.py
# Purpose: Coreset baselines (greedy K-Center and uniform random) and the
#          induced "condensed" graph built from a selected node set.
# ---

import logging

import numpy as np

from ctgc.errors import InvalidConfig
from ctgc.generation.models import CondensedGraph
from ctgc.graph.models import SparseGraph

logger = logging.getLogger(__name__)


def _check_size(n: int, m: int) -> None:
    if m < 1 or m > n:
        raise InvalidConfig("Coreset size must satisfy 1 <= m <= n", {"m": m, "n": n})


def kcenter_coreset(emb: np.ndarray, m: int, seed: int) -> np.ndarray:
    """
    Greedy farthest-point selection: a random first point, then repeatedly
    the point farthest from the chosen set (lowest index on ties).
    """
    emb = np.asarray(emb, dtype=np.float64)
    n = emb.shape[0]
    _check_size(n, m)
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    distance = np.linalg.norm(emb - emb[chosen[0]], axis=1)
    distance[chosen[0]] = -1.0
    for _ in range(1, m):
        nxt = int(np.argmax(distance))
        chosen.append(nxt)
        distance = np.minimum(distance, np.linalg.norm(emb - emb[nxt], axis=1))
        distance[chosen] = -1.0
    return np.asarray(chosen, dtype=np.int64)


def random_coreset(n: int, m: int, seed: int) -> np.ndarray:
    _check_size(n, m)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n, size=m, replace=False)).astype(np.int64)


def coreset_graph(graph: SparseGraph, indices: np.ndarray, targets: np.ndarray, method: str) -> CondensedGraph:
    """Induced subgraph with the original features; `targets` rows become H′."""
    indices = np.asarray(indices, dtype=np.int64)
    adjacency = graph.adjacency[indices][:, indices].toarray()
    adjacency = 0.5 * (adjacency + adjacency.T)
    np.fill_diagonal(adjacency, 0.0)
    logger.info("[BASELINE] ✓ Coreset graph | method: %s | nodes: %d", method, indices.size)
    return CondensedGraph(
        adjacency=adjacency,
        features=graph.features[indices],
        proxy_labels=np.asarray(targets)[indices],
        provenance={"baseline": method, "indices": indices.tolist()},
    )
