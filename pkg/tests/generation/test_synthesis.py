import numpy as np
import pytest

from ctgc.condensation import CondensationState
from ctgc.errors import FormatError, InvalidConfig, InvalidValue, NotSymmetric
from ctgc.generation import (
    CondensedGraph,
    InversionConfig,
    Structure,
    adjacency_statistics,
    generate_condensed,
    load_condensed,
    save_condensed,
)
from ctgc.generation.statistics import condensed_statistics, original_statistics
from ctgc.graph.io import save_graph
from ctgc.relay import EigenMlpParams, GcnParams


def small_state(n_prime=5, emb_dim=4, with_structure=True):
    rng = np.random.default_rng(0)
    h = rng.standard_normal((n_prime, emb_dim))
    return CondensationState(
        h_cent=h,
        z_cent=rng.standard_normal((n_prime, emb_dim)) if with_structure else None,
        y_h=[0, 1, 2, 3, 4],
        y_z=[0, 1, 2, 3, 4],
        matching_rate_history=[1.0],
        total_losses=[0.5],
        selected_iteration=1,
    )


def test_condensed_graph_invariants():
    features = np.zeros((2, 3))
    with pytest.raises(NotSymmetric):
        CondensedGraph(adjacency=[[0.0, 1.0], [0.0, 0.0]], features=features, proxy_labels=features)
    with pytest.raises(InvalidValue):
        CondensedGraph(adjacency=[[1.0, 0.0], [0.0, 0.0]], features=features, proxy_labels=features)
    with pytest.raises(InvalidValue):
        CondensedGraph(adjacency=[[0.0, -1.0], [-1.0, 0.0]], features=features, proxy_labels=features)


def test_spectral_generation():
    f = GcnParams.initialize(6, seed=0, hidden_dim=8, emb_dim=4)
    g = EigenMlpParams.initialize(5, seed=1, hidden_dim=8, emb_dim=4, period=2)
    cg = generate_condensed(
        f, g, small_state(), np.linspace(0.0, 1.6, 5), InversionConfig(steps=20, seed=0),
        provenance={"preset": "test"},
    )
    assert cg.n_prime == 5
    assert cg.features.shape == (5, 6)
    assert cg.features.dtype == np.float32
    assert cg.provenance["structure"] == "spectral"
    assert cg.provenance["preset"] == "test"
    assert set(cg.provenance["residuals"]) == {"eigenvector_fit", "eigenvector_orthogonality", "attribute_fit"}


def test_knn_proxy_needs_no_structural_model():
    f = GcnParams.initialize(6, seed=0, hidden_dim=8, emb_dim=4)
    cg = generate_condensed(f, None, small_state(with_structure=False), None, InversionConfig(steps=5), structure=Structure.KNN_PROXY)
    assert cg.edge_count > 0
    np.testing.assert_array_equal(cg.adjacency, cg.adjacency.T)


def test_knn_features_replaces_spectral_adjacency():
    f = GcnParams.initialize(6, seed=0, hidden_dim=8, emb_dim=4)
    g = EigenMlpParams.initialize(5, seed=1, hidden_dim=8, emb_dim=4, period=2)
    cg = generate_condensed(f, g, small_state(), np.linspace(0.0, 1.6, 5), InversionConfig(steps=5), structure=Structure.KNN_FEATURES)
    assert set(np.unique(cg.adjacency)) <= {0.0, 1.0}
    assert cg.provenance["structure"] == "knn-features"


def test_spectral_generation_needs_structural_branch():
    f = GcnParams.initialize(6, seed=0, hidden_dim=8, emb_dim=4)
    with pytest.raises(InvalidConfig):
        generate_condensed(f, None, small_state(with_structure=False), None, InversionConfig(steps=0))


def test_condensed_directory_restores(tmp_path):
    rng = np.random.default_rng(1)
    adjacency = np.array([[0.0, 0.25, 0.0], [0.25, 0.0, 1.0 / 3.0], [0.0, 1.0 / 3.0, 0.0]])
    cg = CondensedGraph(
        adjacency=adjacency,
        features=rng.standard_normal((3, 4)),
        proxy_labels=rng.standard_normal((3, 2)),
        provenance={"seeds": [0, 1]},
    )
    loaded = load_condensed(save_condensed(cg, tmp_path / "condensed"))
    np.testing.assert_array_equal(loaded.adjacency, adjacency)
    np.testing.assert_array_equal(loaded.features, cg.features)
    np.testing.assert_array_equal(loaded.proxy_labels, cg.proxy_labels)
    assert loaded.provenance == {"seeds": [0, 1]}


def test_missing_condensed_directory(tmp_path):
    with pytest.raises(FormatError):
        load_condensed(tmp_path / "nothing")


def test_adjacency_statistics_count_undirected_edges():
    stats = adjacency_statistics(np.array([[0.0, 1.0], [1.0, 0.0]]), 2 * 1024 * 1024)
    assert (stats.nodes, stats.edges) == (2, 1)
    assert stats.density == 0.5
    assert stats.storage_mb == 2.0


def test_original_and_condensed_statistics(tmp_path, c4):
    paths = save_graph(c4, tmp_path / "graph")
    original = original_statistics(c4, paths.values())
    assert (original.nodes, original.edges) == (4, 4)
    assert original.storage_mb > 0

    cg = CondensedGraph(adjacency=np.zeros((2, 2)), features=np.ones((2, 2)), proxy_labels=np.ones((2, 1)))
    directory = save_condensed(cg, tmp_path / "condensed")
    condensed = condensed_statistics(cg, directory)
    assert (condensed.nodes, condensed.edges, condensed.density) == (2, 0, 0.0)
