import numpy as np
import pytest
from scipy.special import logsumexp

from ctgc.autodiff import Tensor, grad_check
from ctgc.condensation import centroid_separation_loss, contrastive_cluster_loss, joint_loss
from ctgc.errors import DegenerateLoss, InvalidValue

RNG = np.random.default_rng(5)
EMB = RNG.standard_normal((4, 3))
CENTROIDS = RNG.standard_normal((2, 3))
LABELS = np.array([0, 1, 1, 0])
TAU = 0.3


def unit(m):
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def reference_contrastive(emb, centroids, labels, tau):
    logits = unit(emb) @ unit(centroids).T / tau
    total = 0.0
    for i, y in enumerate(labels):
        others = np.delete(logits[i], y)
        total += logsumexp(others) - logits[i, y]
    return total


def test_contrastive_value_matches_reference():
    loss = contrastive_cluster_loss(Tensor(EMB), Tensor(CENTROIDS), LABELS, TAU)
    assert loss.item() == pytest.approx(reference_contrastive(EMB, CENTROIDS, LABELS, TAU), rel=1e-10)


def test_separation_value_matches_reference():
    centroids = RNG.standard_normal((3, 3))
    logits = unit(centroids) @ unit(centroids).T / TAU
    expected = sum(logsumexp(np.delete(logits[i], i)) - 1.0 / TAU for i in range(3))
    assert centroid_separation_loss(Tensor(centroids), TAU).item() == pytest.approx(expected, rel=1e-10)


def test_contrastive_gradient_wrt_embeddings():
    assert grad_check(lambda e: contrastive_cluster_loss(e, Tensor(CENTROIDS), LABELS, TAU), Tensor(EMB)) < 1e-4


def test_contrastive_gradient_wrt_centroids():
    assert grad_check(lambda c: contrastive_cluster_loss(Tensor(EMB), c, LABELS, TAU), Tensor(CENTROIDS)) < 1e-4


def test_joint_gradient_wrt_centroids():
    assert grad_check(lambda c: joint_loss(Tensor(EMB), c, LABELS, TAU, 10.0), Tensor(CENTROIDS)) < 1e-4


def test_single_centroid_is_degenerate():
    with pytest.raises(DegenerateLoss):
        contrastive_cluster_loss(Tensor(EMB), Tensor(CENTROIDS[:1]), np.zeros(4), TAU)
    assert centroid_separation_loss(Tensor(CENTROIDS[:1]), TAU).item() == 0.0


def test_label_out_of_range():
    with pytest.raises(InvalidValue):
        contrastive_cluster_loss(Tensor(EMB), Tensor(CENTROIDS), np.array([0, 1, 2, 0]), TAU)


def test_zero_alpha_drops_separation_term():
    plain = contrastive_cluster_loss(Tensor(EMB), Tensor(CENTROIDS), LABELS, TAU).item()
    assert joint_loss(Tensor(EMB), Tensor(CENTROIDS), LABELS, TAU, 0.0).item() == plain
    weighted = joint_loss(Tensor(EMB), Tensor(CENTROIDS), LABELS, TAU, 2.0).item()
    separation = centroid_separation_loss(Tensor(CENTROIDS), TAU).item()
    assert weighted == pytest.approx(plain + 2.0 * separation, rel=1e-12)
