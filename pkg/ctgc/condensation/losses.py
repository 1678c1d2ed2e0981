# ---
# File: ctgc/condensation/losses.py
# Purpose: Clustering-based contrastive losses. The node-to-centroid term
#          excludes the positive centroid from its denominator, and the
#          centroid term keeps the constant self-similarity numerator.
# ---

import numpy as np

from ctgc.autodiff import Tensor
from ctgc.autodiff import ops
from ctgc.errors import DegenerateLoss, InvalidValue, ShapeMismatch


def _one_hot(labels: np.ndarray, k: int) -> np.ndarray:
    encoded = np.zeros((labels.shape[0], k))
    encoded[np.arange(labels.shape[0]), labels] = 1.0
    return encoded


def contrastive_cluster_loss(emb: Tensor, centroids: Tensor, labels, tau: float) -> Tensor:
    """
    sum_i [ log sum_{j != y_i} exp(sim(e_i, c_j)/τ) - sim(e_i, c_{y_i})/τ ]

    Args:
        emb: n × d embeddings
        centroids: N′ × d centroid embeddings
        labels: Cluster index per row of emb
        tau: Temperature

    Returns:
        Scalar tensor
    """
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    k = centroids.shape[0]
    if k < 2:
        raise DegenerateLoss("Contrastive loss needs at least two centroids", {"n_prime": k})
    if labels.shape[0] != emb.shape[0]:
        raise ShapeMismatch("One label per embedding row is required", {"rows": emb.shape[0], "labels": labels.shape[0]})
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise InvalidValue("Cluster label outside [0, N′)", {"n_prime": k})

    positive = _one_hot(labels, k)
    logits = ops.scale(ops.cosine_similarity_matrix(emb, centroids), 1.0 / tau)
    negatives = ops.sum(ops.mul(ops.exp(logits), Tensor(1.0 - positive)), axis=1)
    return ops.sub(ops.sum(ops.log(negatives)), ops.sum(ops.mul(logits, Tensor(positive))))


def centroid_separation_loss(centroids: Tensor, tau: float) -> Tensor:
    """sum_i [ log sum_{j != i} exp(sim(c_i, c_j)/τ) - 1/τ ]; zero for a single centroid."""
    k = centroids.shape[0]
    if k < 2:
        return Tensor(0.0)
    logits = ops.scale(ops.cosine_similarity_matrix(centroids, centroids), 1.0 / tau)
    off_diagonal = Tensor(1.0 - np.eye(k))
    denominators = ops.sum(ops.mul(ops.exp(logits), off_diagonal), axis=1)
    return ops.sub(ops.sum(ops.log(denominators)), Tensor(k / tau))


def joint_loss(emb: Tensor, centroids: Tensor, labels, tau: float, alpha: float) -> Tensor:
    loss = contrastive_cluster_loss(emb, centroids, labels, tau)
    if alpha == 0:
        return loss
    return ops.add(loss, ops.scale(centroid_separation_loss(centroids, tau), alpha))
