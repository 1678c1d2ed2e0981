import numpy as np
import pytest

from ctgc.autodiff import Tensor
from ctgc.errors import FormatError, InvalidConfig, ShapeMismatch
from ctgc.graph.generators import generate_sbm
from ctgc.graph.models import OperatorKind, SparseGraph
from ctgc.graph.normalize import normalize
from ctgc.relay import (
    Architecture,
    EigenMlpParams,
    GcnParams,
    column_flip_gap,
    eigenmlp_apply,
    fourier_features,
    gcn_forward,
    load_checkpoint,
    relay_forward,
    save_checkpoint,
    sgc_forward,
)


def test_gcn_forward_matches_dense_formula(small_sbm):
    a_hat = normalize(small_sbm, OperatorKind.GCN_ADJACENCY)
    p = GcnParams.initialize(small_sbm.features.shape[1], seed=3, hidden_dim=8, emb_dim=4)
    dense = a_hat.matrix.toarray()
    w1, w2 = (w.values for w in p.weights)
    expected = dense @ np.maximum(dense @ small_sbm.features @ w1, 0.0) @ w2

    out = gcn_forward(p, a_hat, small_sbm.features)
    assert out.shape == (small_sbm.n, 4)
    np.testing.assert_allclose(out.values, expected, atol=1e-10)


def test_sgc_is_two_hop_linear(small_sbm):
    a_hat = normalize(small_sbm, OperatorKind.GCN_ADJACENCY)
    p = GcnParams.initialize(small_sbm.features.shape[1], seed=0, emb_dim=5, arch=Architecture.SGC)
    dense = a_hat.matrix.toarray()
    expected = dense @ dense @ small_sbm.features @ p.weights[0].values

    np.testing.assert_allclose(sgc_forward(p, a_hat, small_sbm.features).values, expected, atol=1e-10)
    np.testing.assert_allclose(relay_forward(p, a_hat, small_sbm.features).values, expected, atol=1e-10)


def test_gcn_rejects_laplacian(c4):
    p = GcnParams.initialize(c4.features.shape[1], seed=0, hidden_dim=4, emb_dim=2)
    with pytest.raises(InvalidConfig):
        gcn_forward(p, normalize(c4, OperatorKind.LAPLACIAN), c4.features)


def test_gcn_rejects_wrong_feature_width(c4):
    p = GcnParams.initialize(c4.features.shape[1] + 1, seed=0, hidden_dim=4, emb_dim=2)
    with pytest.raises(ShapeMismatch):
        gcn_forward(p, normalize(c4, OperatorKind.GCN_ADJACENCY), c4.features)


def test_layer_count_must_match_architecture():
    w = Tensor(np.ones((3, 2)))
    with pytest.raises(ShapeMismatch):
        GcnParams(arch=Architecture.GCN, weights=[w])


def test_fourier_feature_shape():
    w_rho = Tensor(np.random.default_rng(0).standard_normal((6, 5)))
    out = fourier_features([0.0, 0.5, 1.9, 2.0], 3, w_rho)
    assert out.shape == (4, 5)
    with pytest.raises(ShapeMismatch):
        fourier_features([0.1], 2, w_rho)


def test_fourier_features_at_zero_use_cosine_rows():
    w_rho = Tensor(np.arange(8, dtype=np.float64).reshape(4, 2))
    out = fourier_features([0.0], 2, w_rho)
    # basis is [0, 1, 0, 1]
    np.testing.assert_allclose(out.values, [[2.0 + 6.0, 3.0 + 7.0]])


@pytest.mark.parametrize("draw", range(100))
def test_eigenmlp_is_invariant_to_eigenvector_sign(draw):
    rng = np.random.default_rng(draw)
    p = EigenMlpParams.initialize(6, seed=draw, hidden_dim=8, emb_dim=4, period=3)
    eigenvalues = np.sort(rng.uniform(0.0, 2.0, size=6))
    u = rng.standard_normal((10, 6))

    plain = eigenmlp_apply(p, eigenvalues, u).values
    flipped = eigenmlp_apply(p, eigenvalues, -u).values
    np.testing.assert_allclose(plain, flipped, atol=1e-12, rtol=0)


@pytest.mark.parametrize("seed", range(5))
def test_gcn_forward_is_permutation_equivariant(seed):
    graph = generate_sbm([6, 6, 6], p_in=0.5, p_out=0.1, seed=seed)
    perm = np.random.default_rng(seed).permutation(graph.n)
    relabeled = SparseGraph(n=graph.n, adjacency=graph.adjacency[perm][:, perm], features=graph.features[perm])
    p = GcnParams.initialize(graph.feature_dim, seed=seed, hidden_dim=8, emb_dim=4)

    out = gcn_forward(p, normalize(graph, OperatorKind.GCN_ADJACENCY), graph.features).values
    permuted = gcn_forward(p, normalize(relabeled, OperatorKind.GCN_ADJACENCY), relabeled.features).values
    np.testing.assert_allclose(permuted, out[perm], atol=1e-12, rtol=0)


def test_negating_every_column_leaves_eigenmlp_unchanged():
    rng = np.random.default_rng(4)
    p = EigenMlpParams.initialize(6, seed=4, hidden_dim=8, emb_dim=4, period=3)
    u = rng.standard_normal((10, 6))
    assert column_flip_gap(p, np.linspace(0.0, 1.5, 6), u, range(6)) < 1e-12


def test_column_flips_exact_when_first_layer_is_diagonal():
    rng = np.random.default_rng(5)
    p = EigenMlpParams.initialize(6, seed=5, hidden_dim=6, emb_dim=4, period=3)
    p.phi_w1.values[...] = np.diag(rng.uniform(0.5, 2.0, 6))
    u = rng.standard_normal((10, 6))
    for columns in ([0], [1, 4], [0, 2, 3, 5]):
        assert column_flip_gap(p, np.linspace(0.0, 1.5, 6), u, columns) < 1e-12


@pytest.mark.parametrize("draw", range(20))
def test_column_flip_gap_measured_for_generic_models(draw):
    rng = np.random.default_rng(draw)
    p = EigenMlpParams.initialize(6, seed=draw, hidden_dim=8, emb_dim=4, period=3)
    u = rng.standard_normal((10, 6))
    columns = sorted(rng.choice(6, size=int(rng.integers(1, 6)), replace=False))
    gap = column_flip_gap(p, np.sort(rng.uniform(0.0, 2.0, 6)), u, columns)
    # the row-wise encoding mixes columns before the absolute value
    assert np.isfinite(gap)
    assert gap > 1e-6


def test_column_flip_gap_rejects_unknown_column():
    p = EigenMlpParams.initialize(3, seed=0, hidden_dim=4, emb_dim=2, period=2)
    with pytest.raises(InvalidConfig):
        column_flip_gap(p, np.zeros(3), np.ones((2, 3)), [3])


def test_eigenmlp_rejects_wrong_width():
    p = EigenMlpParams.initialize(4, seed=0, hidden_dim=8, emb_dim=4, period=2)
    with pytest.raises(ShapeMismatch):
        eigenmlp_apply(p, np.zeros(4), np.zeros((3, 5)))
    with pytest.raises(ShapeMismatch):
        eigenmlp_apply(p, np.zeros(3), np.zeros((3, 4)))


@pytest.mark.parametrize(
    "params",
    [
        GcnParams.initialize(7, seed=1, hidden_dim=5, emb_dim=3),
        GcnParams.initialize(7, seed=2, emb_dim=3, arch=Architecture.SGC),
        EigenMlpParams.initialize(4, seed=3, hidden_dim=6, emb_dim=3, period=2),
    ],
    ids=["gcn", "sgc", "eigenmlp"],
)
def test_checkpoint_restores_exactly(tmp_path, params):
    path = tmp_path / "model.ctgm"
    save_checkpoint(path, params)
    loaded = load_checkpoint(path)
    assert type(loaded) is type(params)
    for before, after in zip(params.values(), loaded.values()):
        np.testing.assert_array_equal(before, after)


def test_checkpoint_bad_magic(tmp_path):
    path = tmp_path / "model.ctgm"
    save_checkpoint(path, GcnParams.initialize(3, seed=0, hidden_dim=2, emb_dim=2))
    path.write_bytes(b"CTGF" + path.read_bytes()[4:])
    with pytest.raises(FormatError):
        load_checkpoint(path)
