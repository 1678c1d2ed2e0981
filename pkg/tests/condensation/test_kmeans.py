import numpy as np
import pytest

from ctgc.condensation import assign_by_similarity, cluster_means, kmeans
from ctgc.errors import InvalidConfig, ShapeMismatch


def blobs(seed=0):
    rng = np.random.default_rng(seed)
    centers = np.array([[10.0, 0.0], [0.0, 10.0], [-10.0, -10.0]])
    points = np.vstack([c + 0.1 * rng.standard_normal((15, 2)) for c in centers])
    return points, np.repeat(np.arange(3), 15)


def same_partition(a, b):
    # equal up to a relabeling
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


def test_separated_blobs_recovered():
    points, truth = blobs()
    result = kmeans(points, 3, seed=0)
    assert same_partition(result.labels, truth)
    np.testing.assert_allclose(result.centroids, cluster_means(points, result.labels, 3))
    assert result.history == sorted(result.history, reverse=True)


def test_kmeans_is_deterministic():
    points, _ = blobs(1)
    a = kmeans(points, 4, seed=7)
    b = kmeans(points, 4, seed=7)
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.centroids, b.centroids)


def test_k_equals_n_has_zero_inertia():
    points = np.random.default_rng(0).standard_normal((5, 3))
    result = kmeans(points, 5, seed=0)
    assert result.inertia == pytest.approx(0.0, abs=1e-12)
    assert sorted(result.labels.tolist()) == [0, 1, 2, 3, 4]


def test_identical_points_leave_no_cluster_empty():
    result = kmeans(np.ones((5, 2)), 3, seed=0, n_init=1)
    assert np.all(np.bincount(result.labels, minlength=3) > 0)


@pytest.mark.parametrize("k", [0, 6])
def test_k_out_of_range(k):
    with pytest.raises(InvalidConfig):
        kmeans(np.zeros((5, 2)), k, seed=0)


def test_assign_by_similarity_uses_direction():
    emb = np.array([[5.0, 0.1], [0.1, 0.2], [-3.0, 0.0]])
    centroids = np.array([[1.0, 0.0], [0.0, 1.0]])
    np.testing.assert_array_equal(assign_by_similarity(emb, centroids), [0, 1, 1])


def test_assign_ties_go_to_lowest_index():
    emb = np.array([[1.0, 1.0]])
    centroids = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert assign_by_similarity(emb, centroids).tolist() == [0]


def test_assign_width_mismatch():
    with pytest.raises(ShapeMismatch):
        assign_by_similarity(np.ones((2, 3)), np.ones((2, 2)))


def test_cluster_means_leave_empty_clusters_at_zero():
    means = cluster_means(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([0, 0]), 2)
    np.testing.assert_allclose(means, [[2.0, 3.0], [0.0, 0.0]])


def lloyd_inertia(points, init, max_iter=100):
    centroids = init.copy()
    for _ in range(max_iter):
        labels = np.argmin(((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2), axis=1)
        updated = np.array([
            points[labels == c].mean(axis=0) if np.any(labels == c) else centroids[c]
            for c in range(len(centroids))
        ])
        if np.array_equal(updated, centroids):
            break
        centroids = updated
    return float(((points - centroids[labels]) ** 2).sum())


def test_inertia_matches_best_of_random_restarts():
    rng = np.random.default_rng(0)
    points = rng.uniform(-1.0, 1.0, (20, 2))
    best = min(
        lloyd_inertia(points, points[rng.choice(20, size=3, replace=False)])
        for _ in range(1000)
    )
    assert kmeans(points, 3, seed=0).inertia <= best * 1.001
