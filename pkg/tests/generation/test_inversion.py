import logging

import numpy as np
import pytest

from ctgc.autodiff import Tensor, grad_check
from ctgc.autodiff import ops
from ctgc.errors import ShapeMismatch
from ctgc.generation import InversionConfig, invert_attributes, invert_eigenvectors, raw_adjacency, reconstruct_adjacency
from ctgc.generation.inversion import cosine_lr, eigenvector_residuals, orthogonality_residual, orthonormal_init
from ctgc.graph.generators import generate_sbm
from ctgc.graph.models import OperatorKind
from ctgc.graph.normalize import gcn_normalize_dense, normalize
from ctgc.relay import Architecture, EigenMlpParams, GcnParams, eigenmlp_apply, relay_forward
from ctgc.spectral.solver import dense_eig


def test_orthonormal_init():
    u = orthonormal_init(12, seed=3)
    assert orthogonality_residual(u) < 1e-10
    np.testing.assert_array_equal(u, orthonormal_init(12, seed=3))


def test_zero_steps_returns_orthonormal_init():
    g = EigenMlpParams.initialize(5, seed=0, hidden_dim=8, emb_dim=4, period=2)
    z = np.random.default_rng(0).standard_normal((5, 4))
    result = invert_eigenvectors(g, z, np.linspace(0.0, 1.5, 5), InversionConfig(steps=0, seed=2))
    np.testing.assert_array_equal(result.solution, orthonormal_init(5, 2))
    assert result.residuals["orthogonality"] < 1e-10
    assert result.history == []


def test_eigenvector_inversion_improves_fit():
    g = EigenMlpParams.initialize(12, seed=1, hidden_dim=16, emb_dim=8, period=4)
    eigenvalues = np.linspace(0.0, 1.8, 12)
    planted = orthonormal_init(12, seed=9)
    z = eigenmlp_apply(g, eigenvalues, planted).values
    before = g.values()

    start_fit, _ = eigenvector_residuals(g, z, eigenvalues, orthonormal_init(12, seed=0))
    result = invert_eigenvectors(g, z, eigenvalues, InversionConfig(steps=300, lr=0.01, seed=0))
    assert result.residuals["fit"] < start_fit
    assert min(result.history) < result.history[0]
    assert result.residuals["orthogonality"] < 1.0
    # the structural model stays frozen
    for a, b in zip(before, g.values()):
        np.testing.assert_array_equal(a, b)


def test_eigenvector_inversion_shape_check():
    g = EigenMlpParams.initialize(4, seed=0, hidden_dim=4, emb_dim=3, period=2)
    with pytest.raises(ShapeMismatch):
        invert_eigenvectors(g, np.zeros((4, 2)), np.zeros(4), InversionConfig(steps=0))


def test_cycle_spectrum_rebuilds_normalized_adjacency(c4):
    eig = dense_eig(normalize(c4, OperatorKind.LAPLACIAN))
    adjacency = reconstruct_adjacency(eig.eigenvectors, eig.eigenvalues, threshold=0.01)
    expected = np.array([
        [0.0, 0.5, 0.0, 0.5],
        [0.5, 0.0, 0.5, 0.0],
        [0.0, 0.5, 0.0, 0.5],
        [0.5, 0.0, 0.5, 0.0],
    ])
    np.testing.assert_allclose(adjacency, expected, atol=1e-12)


def test_reconstruction_is_a_valid_adjacency():
    u = orthonormal_init(8, seed=5)
    eigenvalues = np.random.default_rng(5).uniform(0.0, 2.0, 8)
    adjacency = reconstruct_adjacency(u, eigenvalues, threshold=0.05)
    np.testing.assert_array_equal(adjacency, adjacency.T)
    assert np.all(np.diag(adjacency) == 0.0)
    assert np.all((adjacency == 0.0) | (adjacency >= 0.05))
    raw = raw_adjacency(u, eigenvalues)
    np.testing.assert_allclose(raw, np.eye(8) - u @ np.diag(eigenvalues) @ u.T, atol=1e-10)


def test_identity_spectrum_gives_empty_graph(caplog):
    with caplog.at_level(logging.WARNING):
        adjacency = reconstruct_adjacency(np.eye(3), np.zeros(3), threshold=0.01)
    assert not np.any(adjacency)
    assert "empty" in caplog.text


def test_raw_adjacency_shape_check():
    with pytest.raises(ShapeMismatch):
        raw_adjacency(np.eye(3), np.zeros(2))


def test_attribute_inversion_through_identity_model():
    p = GcnParams.initialize(3, seed=0, emb_dim=3, arch=Architecture.SGC)
    p.load_values([np.eye(3)])
    target = np.random.default_rng(2).uniform(-1.0, 1.0, (4, 3))
    # no edges, so Â′ = I and f(X′) = X′
    result = invert_attributes(p, target, np.zeros((4, 4)), InversionConfig(steps=3000, lr=0.05, seed=1))
    np.testing.assert_allclose(result.solution, target, atol=1e-3)
    assert result.residuals["fit"] == result.objective


def test_attribute_inversion_std_width():
    p = GcnParams.initialize(3, seed=0, hidden_dim=4, emb_dim=2)
    with pytest.raises(ShapeMismatch):
        invert_attributes(p, np.zeros((2, 2)), np.zeros((2, 2)), InversionConfig(steps=0), feature_std=np.ones(5))


def test_cosine_schedule_endpoints():
    assert cosine_lr(0.1, 0, 100) == pytest.approx(0.1)
    assert cosine_lr(0.1, 50, 100) == pytest.approx(0.05)
    assert cosine_lr(0.1, 100, 100) == pytest.approx(0.0, abs=1e-15)
    assert cosine_lr(0.1, 100, 100, floor=0.05) == pytest.approx(0.005)
    assert cosine_lr(0.1, 0, 100, floor=0.05) == pytest.approx(0.1)


def test_eigenvector_objective_gradient():
    g = EigenMlpParams.initialize(4, seed=2, hidden_dim=6, emb_dim=3, period=2)
    g.freeze()
    eigenvalues = np.array([0.0, 0.4, 1.1, 1.7])
    target = Tensor(np.random.default_rng(1).standard_normal((4, 3)))

    def objective(u):
        fit = ops.norm(ops.sub(target, eigenmlp_apply(g, eigenvalues, u)))
        ortho = ops.norm(ops.sub(Tensor(np.eye(4)), ops.matmul(ops.transpose(u), u)))
        return ops.add(fit, ops.scale(ortho, 0.5))

    assert grad_check(objective, Tensor(orthonormal_init(4, seed=0) + 0.1)) < 1e-4


def test_attribute_objective_gradient():
    f = GcnParams.initialize(3, seed=0, hidden_dim=5, emb_dim=2)
    f.freeze()
    a_hat = gcn_normalize_dense(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.5], [0.0, 0.5, 0.0]]))
    target = Tensor(np.random.default_rng(3).standard_normal((3, 2)))
    x = np.random.default_rng(4).standard_normal((3, 3))
    assert grad_check(lambda t: ops.norm(ops.sub(target, relay_forward(f, a_hat, t))), Tensor(x)) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_raw_reconstruction_keeps_spectrum(seed):
    rng = np.random.default_rng(seed)
    size = int(rng.integers(5, 17))
    graph = generate_sbm([size] * 3, p_in=0.4, p_out=0.05, seed=seed)
    eig = dense_eig(normalize(graph, OperatorKind.LAPLACIAN))
    raw = raw_adjacency(eig.eigenvectors, eig.eigenvalues)
    np.testing.assert_allclose(np.linalg.eigvalsh(np.eye(graph.n) - raw), eig.eigenvalues, atol=1e-10)


def planted_structure(seed: int):
    g = EigenMlpParams.initialize(12, seed=2)
    eigenvalues = np.linspace(0.0, 1.9, 12)
    planted = orthonormal_init(12, seed=100 + seed)
    return g, eigenvalues, planted, eigenmlp_apply(g, eigenvalues, planted).values


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_planted_eigenvectors_recovered(seed):
    g, eigenvalues, planted, z = planted_structure(seed)
    cfg = InversionConfig(steps=2000, lr=0.01, seed=6)
    # the start is unrelated to the planted solution
    assert np.linalg.norm(orthonormal_init(12, cfg.seed) - planted) > 1.0

    result = invert_eigenvectors(g, z, eigenvalues, cfg)
    assert result.objective < 1e-3
    assert result.residuals["orthogonality"] < 1e-3


def test_eigenvector_loss_moving_average_never_rises():
    g, eigenvalues, _, z = planted_structure(1)
    result = invert_eigenvectors(g, z, eigenvalues, InversionConfig(steps=600, lr=0.01, seed=6))
    averaged = np.convolve(result.history, np.ones(50) / 50, mode="valid")
    assert np.all(np.diff(averaged) <= 1e-10)


def test_planted_attributes_recovered():
    rng = np.random.default_rng(8)
    adjacency = (rng.uniform(size=(20, 20)) < 0.2).astype(float)
    adjacency = np.triu(adjacency, 1)
    adjacency = adjacency + adjacency.T
    f = GcnParams.initialize(8, seed=1, emb_dim=6, arch=Architecture.SGC)
    planted = rng.standard_normal((20, 8))
    target = relay_forward(f, gcn_normalize_dense(adjacency), planted).values

    result = invert_attributes(f, target, adjacency, InversionConfig(steps=2000, lr=0.05, seed=0))
    assert result.objective < 1e-3
