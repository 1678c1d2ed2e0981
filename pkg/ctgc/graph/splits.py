# ---
# File: ctgc/graph/splits.py
# Purpose: Link-prediction split: 100 training links, 5% validation and 15%
#          test edges, matched negatives, and the message graph with every
#          validation/test edge removed.
# ---

import logging
import math

import numpy as np
from scipy import sparse

from ctgc.errors import InsufficientEdges
from ctgc.graph.models import LinkSplit, SparseGraph

logger = logging.getLogger(__name__)

TRAIN_LINKS = 100
VAL_FRACTION = 0.05
TEST_FRACTION = 0.15
MIN_EDGES = 200


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split_sizes(edge_count: int) -> tuple[int, int, int]:
    return TRAIN_LINKS, _round_half_up(VAL_FRACTION * edge_count), _round_half_up(TEST_FRACTION * edge_count)


def pair_keys(pairs: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    return lo.astype(np.int64) * n + hi


# ---
# Draw `count` distinct unordered pairs u < v that are neither edges nor in
# `exclude`. Rejection sampling for sparse graphs; dense graphs enumerate
# the complement instead.
# ---
def sample_non_edges(
    n: int,
    edge_keys: np.ndarray,
    count: int,
    rng: np.random.Generator,
    exclude: np.ndarray = None,
) -> np.ndarray:
    if count == 0:
        return np.zeros((0, 2), dtype=np.int64)
    blocked = set(edge_keys.tolist())
    if exclude is not None:
        blocked.update(exclude.tolist())
    available = n * (n - 1) // 2 - len(blocked)
    if available < count:
        raise InsufficientEdges("Not enough non-edges to sample negatives", {"needed": count, "available": available})

    if available < 4 * count:
        upper_u, upper_v = np.triu_indices(n, k=1)
        keys = upper_u.astype(np.int64) * n + upper_v
        keys = keys[~np.isin(keys, np.fromiter(blocked, dtype=np.int64, count=len(blocked)))]
        chosen = rng.choice(keys, size=count, replace=False)
    else:
        chosen = []
        taken = set()
        while len(chosen) < count:
            batch = rng.integers(0, n, size=(2 * (count - len(chosen)) + 16, 2))
            for u, v in batch:
                if u == v:
                    continue
                key = int(min(u, v)) * n + int(max(u, v))
                if key in blocked or key in taken:
                    continue
                taken.add(key)
                chosen.append(key)
                if len(chosen) == count:
                    break
        chosen = np.asarray(chosen, dtype=np.int64)
    return np.stack([chosen // n, chosen % n], axis=1).astype(np.int64)


def split_links(graph: SparseGraph, seed: int) -> LinkSplit:
    """
    Uniformly partition the edge set and sample one negative per positive.

    Args:
        graph: Original graph with at least 200 undirected edges
        seed: Generator seed; identical seeds give identical splits

    Returns:
        LinkSplit
    """
    edges = graph.edges()
    edges = edges[edges[:, 0] != edges[:, 1]]
    m = edges.shape[0]
    n_train, n_val, n_test = split_sizes(m)
    if m < MIN_EDGES or n_train + n_val + n_test > m:
        raise InsufficientEdges(
            "Graph has too few edges for a link split",
            {"edges": m, "required": max(MIN_EDGES, n_train + n_val + n_test)},
        )

    rng = np.random.default_rng(seed)
    order = rng.permutation(m)
    val = edges[order[:n_val]]
    test = edges[order[n_val:n_val + n_test]]
    train = edges[order[n_val + n_test:n_val + n_test + n_train]]

    edge_keys = pair_keys(edges, graph.n)
    negatives = sample_non_edges(graph.n, edge_keys, n_train + n_val + n_test, rng)
    train_neg = negatives[:n_train]
    val_neg = negatives[n_train:n_train + n_val]
    test_neg = negatives[n_train + n_val:]

    removed = np.concatenate([val, test])
    drop = sparse.csr_matrix(
        (np.ones(2 * removed.shape[0]),
         (np.concatenate([removed[:, 0], removed[:, 1]]), np.concatenate([removed[:, 1], removed[:, 0]]))),
        shape=graph.adjacency.shape,
    )
    kept = graph.adjacency - graph.adjacency.multiply(drop)
    kept = sparse.csr_matrix(kept)
    kept.eliminate_zeros()
    message_graph = SparseGraph(n=graph.n, adjacency=kept, features=graph.features, labels=graph.labels)

    logger.info(
        "[SPLIT] ✓ Link split | train: %d | val: %d | test: %d | message edges: %d",
        n_train, n_val, n_test, message_graph.edge_count,
    )
    return LinkSplit(
        train_links=train,
        val_links=val,
        test_links=test,
        train_negatives=train_neg,
        val_negatives=val_neg,
        test_negatives=test_neg,
        message_graph=message_graph,
        seed=seed,
    )
