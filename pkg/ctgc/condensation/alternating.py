# ---
# File: ctgc/condensation/alternating.py
# Purpose: Alternating optimization of the semantic and structural branches.
#          Each branch is trained on the cluster labels inferred by the
#          other; the iteration with the lowest total loss is kept.
# ---

import logging
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ctgc.autodiff import AdamState, Tape, Tensor, adam_step, backward
from ctgc.condensation.kmeans import assign_by_similarity, cluster_means, kmeans
from ctgc.condensation.losses import joint_loss
from ctgc.condensation.models import (
    CondensationResult,
    CondensationState,
    CondenseConfig,
    Phase,
    PhaseRecord,
)
from ctgc.condensation.training_log import TrainingLog
from ctgc.errors import NumericalOverflow, ShapeMismatch
from ctgc.graph.models import NormalizedOperator, OperatorKind, SparseGraph
from ctgc.graph.normalize import normalize
from ctgc.relay.eigenmlp import eigenmlp_forward
from ctgc.relay.gcn import relay_forward
from ctgc.relay.models import EigenMlpParams, GcnParams
from ctgc.spectral.models import EigenSystem

logger = logging.getLogger(__name__)


# ---
# M_train Adam steps on one branch: embeddings come from `forward`, the
# centroid tensor is trained alongside the branch parameters. Returns the
# per-step losses and the loss re-evaluated after the last update.
# ---
def _train_phase(
    forward: Callable[[], Tensor],
    params: list[Tensor],
    centroids: Tensor,
    labels: np.ndarray,
    cfg: CondenseConfig,
    state: AdamState,
    phase: Phase,
    iteration: int,
) -> tuple[list[float], Tensor, float]:
    trainable = params + [centroids]
    step_losses = []
    try:
        for _ in range(cfg.m_train):
            with Tape() as tape:
                loss = joint_loss(forward(), centroids, labels, cfg.tau, cfg.alpha)
            backward(tape, loss)
            adam_step(trainable, None, state)
            for tensor in trainable:
                tensor.zero_grad()
            step_losses.append(loss.item())
        emb = forward()
        final = joint_loss(emb, centroids, labels, cfg.tau, cfg.alpha).item()
    except NumericalOverflow as exc:
        logger.error("[CONDENSE] ✗ Numerical overflow | iteration: %d | phase: %s | %s", iteration, phase.value, exc)
        raise NumericalOverflow(exc.message, {**exc.details, "iteration": iteration, "phase": phase.value})
    return step_losses, emb, final


def initial_centroids(f: GcnParams, a_hat: NormalizedOperator, features: Tensor, cfg: CondenseConfig) -> tuple[np.ndarray, np.ndarray]:
    h = relay_forward(f, a_hat, features).values
    assignment = kmeans(h, cfg.n_prime, cfg.seed)
    return assignment.labels, cluster_means(h, assignment.labels, cfg.n_prime)


def alternating_optimize(
    f: GcnParams,
    g: EigenMlpParams,
    graph: SparseGraph,
    eig: EigenSystem,
    cfg: CondenseConfig,
    log_path: Optional[Path] = None,
    a_hat: Optional[NormalizedOperator] = None,
) -> CondensationResult:
    """
    Train both relay models against each other's cluster labels.

    H′ starts as the cluster means of k-means on the pretrained semantic
    embeddings and Z′ as the means of the initial structural embeddings
    under the same labels. Each of the K_iter iterations runs a semantic
    phase on y^Z, refreshes y^H, runs a structural phase on y^H, and
    refreshes y^Z.

    Args:
        f: Pretrained semantic relay model, updated in place
        g: Structural relay model, updated in place
        graph: Original (or message) graph; labels are never read
        eig: N′ eigenpairs of the graph's Laplacian
        cfg: Condensation hyperparameters
        log_path: Optional JSON-lines training log

    Returns:
        CondensationResult with the state and models of the selected iteration
    """
    if eig.size != cfg.n_prime or g.n_prime != cfg.n_prime:
        raise ShapeMismatch("Eigensystem and EigenMLP must match N′", {"eig": eig.size, "eigenmlp": g.n_prime, "n_prime": cfg.n_prime})
    if a_hat is None:
        a_hat = normalize(graph, OperatorKind.GCN_ADJACENCY)
    features = Tensor(graph.features)
    log = TrainingLog(log_path)

    y_h, h_init = initial_centroids(f, a_hat, features, cfg)
    y_z = y_h.copy()
    z_init = cluster_means(eigenmlp_forward(g, eig).values, y_h, cfg.n_prime)
    h_cent = Tensor(h_init, requires_grad=True, name="H'")
    z_cent = Tensor(z_init, requires_grad=True, name="Z'")

    semantic_state = AdamState.for_params(f.parameters() + [h_cent], cfg.lr_sem)
    structural_state = AdamState.for_params(g.parameters() + [z_cent], cfg.lr_str)

    def semantic():
        return relay_forward(f, a_hat, features)

    def structural():
        return eigenmlp_forward(g, eig)

    phases, rates, totals, snapshots = [], [], [], []
    for iteration in range(1, cfg.k_iter + 1):
        steps, h, sem_loss = _train_phase(
            semantic, f.parameters(), h_cent, y_z, cfg, semantic_state, Phase.SEMANTIC, iteration,
        )
        y_h = assign_by_similarity(h, h_cent)
        record = PhaseRecord(
            iteration=iteration, phase=Phase.SEMANTIC, loss=sem_loss,
            matching_rate=float(np.mean(y_h == y_z)), step_losses=steps,
        )
        phases.append(record)
        log.write(record)

        steps, z, str_loss = _train_phase(
            structural, g.parameters(), z_cent, y_h, cfg, structural_state, Phase.STRUCTURAL, iteration,
        )
        y_z = assign_by_similarity(z, z_cent)
        rate = float(np.mean(y_h == y_z))
        record = PhaseRecord(
            iteration=iteration, phase=Phase.STRUCTURAL, loss=str_loss, matching_rate=rate, step_losses=steps,
        )
        phases.append(record)
        log.write(record)

        rates.append(rate)
        totals.append(sem_loss + str_loss)
        snapshots.append((f.values(), g.values(), h_cent.numpy(), z_cent.numpy(), y_h.copy(), y_z.copy()))
        logger.info(
            "[CONDENSE] Iteration %d/%d | semantic: %.4f | structural: %.4f | matching rate: %.3f",
            iteration, cfg.k_iter, sem_loss, str_loss, rate,
        )

    best = int(np.argmin(totals))
    f_values, g_values, h_best, z_best, yh_best, yz_best = snapshots[best]
    f.load_values(f_values)
    g.load_values(g_values)
    logger.info("[CONDENSE] ✓ Selected iteration %d | total loss: %.4f", best + 1, totals[best])

    state = CondensationState(
        h_cent=h_best,
        z_cent=z_best,
        y_h=yh_best,
        y_z=yz_best,
        matching_rate_history=rates,
        total_losses=totals,
        phases=phases,
        selected_iteration=best + 1,
    )
    return CondensationResult(state=state, semantic=f, structural=g)


# ---
# Semantic branch alone (structure-free ablation): the branch is trained on
# its own refreshed labels each iteration.
# ---
def semantic_only_optimize(
    f: GcnParams,
    graph: SparseGraph,
    cfg: CondenseConfig,
    log_path: Optional[Path] = None,
    a_hat: Optional[NormalizedOperator] = None,
) -> CondensationResult:
    if a_hat is None:
        a_hat = normalize(graph, OperatorKind.GCN_ADJACENCY)
    features = Tensor(graph.features)
    log = TrainingLog(log_path)

    labels, h_init = initial_centroids(f, a_hat, features, cfg)
    h_cent = Tensor(h_init, requires_grad=True, name="H'")
    adam = AdamState.for_params(f.parameters() + [h_cent], cfg.lr_sem)

    phases, rates, totals, snapshots = [], [], [], []
    for iteration in range(1, cfg.k_iter + 1):
        steps, h, loss = _train_phase(
            lambda: relay_forward(f, a_hat, features), f.parameters(), h_cent, labels, cfg, adam, Phase.SEMANTIC, iteration,
        )
        refreshed = assign_by_similarity(h, h_cent)
        rate = float(np.mean(refreshed == labels))
        labels = refreshed
        record = PhaseRecord(iteration=iteration, phase=Phase.SEMANTIC, loss=loss, matching_rate=rate, step_losses=steps)
        phases.append(record)
        log.write(record)
        rates.append(rate)
        totals.append(loss)
        snapshots.append((f.values(), h_cent.numpy(), labels.copy()))

    best = int(np.argmin(totals))
    f_values, h_best, labels_best = snapshots[best]
    f.load_values(f_values)
    state = CondensationState(
        h_cent=h_best,
        z_cent=None,
        y_h=labels_best,
        y_z=labels_best,
        matching_rate_history=rates,
        total_losses=totals,
        phases=phases,
        selected_iteration=best + 1,
    )
    return CondensationResult(state=state, semantic=f, structural=None)
