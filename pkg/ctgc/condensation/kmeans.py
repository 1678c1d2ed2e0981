# ---
# File: ctgc/condensation/kmeans.py
# Purpose: Seeded k-means (k-means++ init, Lloyd iterations, empty-cluster
#          repair, best of n_init restarts) and cosine nearest-centroid
#          assignment.
# ---

import logging

import numpy as np

from ctgc.autodiff import Tensor
from ctgc.condensation.models import ClusterAssignment
from ctgc.errors import InvalidConfig, ShapeMismatch

logger = logging.getLogger(__name__)

KMEANS_TOL = 1e-6
KMEANS_MAX_ITER = 100
DEFAULT_N_INIT = 10
COSINE_EPS = 1e-12


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d = (
        np.sum(points ** 2, axis=1, keepdims=True)
        - 2.0 * points @ centroids.T
        + np.sum(centroids ** 2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    closest = _squared_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(remaining))
        chosen.append(idx)
        closest = np.minimum(closest, _squared_distances(points, points[idx:idx + 1])[:, 0])
    return points[chosen].copy()


# ---
# Give every empty cluster the point currently farthest from its own
# centroid, taken from a cluster with more than one member.
# ---
def _repair_empty(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, dist: np.ndarray) -> None:
    k = centroids.shape[0]
    for cluster in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[cluster] > 0:
            continue
        own = dist[np.arange(labels.size), labels].copy()
        own[counts[labels] <= 1] = -1.0
        victim = int(np.argmax(own))
        labels[victim] = cluster
        centroids[cluster] = points[victim]
        dist[:, cluster] = _squared_distances(points, centroids[cluster:cluster + 1])[:, 0]


def _cluster_means(points: np.ndarray, labels: np.ndarray, k: int, previous: np.ndarray) -> np.ndarray:
    sums = np.zeros((k, points.shape[1]))
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=k)
    means = previous.copy()
    filled = counts > 0
    means[filled] = sums[filled] / counts[filled, None]
    return means


def _lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int, tol: float) -> tuple[np.ndarray, np.ndarray, list[float]]:
    k = centroids.shape[0]
    history: list[float] = []
    labels = np.zeros(points.shape[0], dtype=np.int64)
    for _ in range(max_iter):
        dist = _squared_distances(points, centroids)
        labels = np.argmin(dist, axis=1)
        _repair_empty(points, labels, centroids, dist)
        centroids = _cluster_means(points, labels, k, centroids)
        inertia = float(np.sum((points - centroids[labels]) ** 2))
        history.append(inertia)
        if len(history) > 1 and history[-2] - history[-1] < tol:
            break
        if inertia == 0.0:
            break
    return labels, centroids, history


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int,
    n_init: int = DEFAULT_N_INIT,
    max_iter: int = KMEANS_MAX_ITER,
    tol: float = KMEANS_TOL,
) -> ClusterAssignment:
    """
    Cluster rows of `points` into k groups; the restart with the lowest
    inertia wins (earliest on ties).

    Args:
        points: n × d matrix
        k: Cluster count, k <= n
        seed: Generator seed
        n_init: Independent k-means++ restarts

    Returns:
        ClusterAssignment whose centroids are the means of its labels
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k < 1 or k > n:
        raise InvalidConfig("k-means needs 1 <= k <= n", {"k": k, "n": n})
    if n_init < 1:
        raise InvalidConfig("n_init must be positive", {"n_init": n_init})

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        labels, centroids, history = _lloyd(points, _plus_plus_init(points, k, rng), max_iter, tol)
        if best is None or history[-1] < best[2][-1]:
            best = (labels, centroids, history)

    labels, centroids, history = best
    logger.debug("[KMEANS] Done | k: %d | inertia: %.6g | iterations: %d", k, history[-1], len(history))
    return ClusterAssignment(labels=labels, centroids=centroids, inertia=history[-1], history=history)


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return matrix / np.maximum(norms, COSINE_EPS)


def assign_by_similarity(emb, centroids) -> np.ndarray:
    """label_i = argmax_j cos(emb_i, centroid_j); ties resolve to the lowest j."""
    emb = emb.values if isinstance(emb, Tensor) else np.asarray(emb, dtype=np.float64)
    centroids = centroids.values if isinstance(centroids, Tensor) else np.asarray(centroids, dtype=np.float64)
    if emb.shape[1] != centroids.shape[1]:
        raise ShapeMismatch("Embedding and centroid widths differ", {"emb": emb.shape, "centroids": centroids.shape})
    sims = _unit_rows(emb) @ _unit_rows(centroids).T
    return np.argmax(sims, axis=1).astype(np.int64)


def cluster_means(points: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Arithmetic per-cluster means; empty clusters stay at zero."""
    points = np.asarray(points, dtype=np.float64)
    return _cluster_means(points, np.asarray(labels, dtype=np.int64), k, np.zeros((k, points.shape[1])))
