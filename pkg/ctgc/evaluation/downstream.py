# ---
# File: ctgc/evaluation/downstream.py
# Purpose: Train a downstream GCN/SGC on the condensed graph with H′ as
#          regression targets, then use it frozen as a feature extractor.
# ---

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from ctgc.autodiff import AdamState, Tape, Tensor, adam_step, backward
from ctgc.autodiff import ops
from ctgc.errors import NumericalOverflow
from ctgc.generation.models import CondensedGraph
from ctgc.graph.models import OperatorKind, SparseGraph
from ctgc.graph.normalize import gcn_normalize_dense, normalize
from ctgc.relay.gcn import relay_forward
from ctgc.relay.models import Architecture, GcnParams

logger = logging.getLogger(__name__)


class DownstreamRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: GcnParams
    losses: list[float]


def train_downstream(
    cg: CondensedGraph,
    arch: Architecture,
    epochs: int,
    lr: float,
    seed: int,
    hidden_dim: int = 256,
) -> DownstreamRun:
    """
    Fit mse(rownorm(f(Â′, X′)), rownorm(H′)) with Adam.

    Args:
        cg: Condensed graph
        arch: gcn or sgc
        epochs: Adam steps; 0 returns the initialization
        lr: Learning rate
        seed: Initialization seed

    Returns:
        DownstreamRun with trained parameters and per-epoch losses
    """
    features = Tensor(cg.features)
    target = Tensor(ops.row_l2_normalize(Tensor(cg.proxy_labels)).values)
    a_hat = gcn_normalize_dense(cg.adjacency)
    model = GcnParams.initialize(
        in_dim=cg.features.shape[1],
        seed=seed,
        hidden_dim=hidden_dim,
        emb_dim=cg.proxy_labels.shape[1],
        arch=arch,
    )
    state = AdamState.for_params(model.parameters(), lr)

    losses = []
    for epoch in range(epochs):
        try:
            with Tape() as tape:
                out = ops.row_l2_normalize(relay_forward(model, a_hat, features))
                loss = ops.mse(out, target)
        except NumericalOverflow as exc:
            logger.error("[DOWNSTREAM] ✗ Numerical overflow | epoch: %d", epoch)
            raise NumericalOverflow(exc.message, {**exc.details, "epoch": epoch})
        backward(tape, loss)
        adam_step(model.parameters(), None, state)
        model.zero_grad()
        losses.append(loss.item())

    if losses:
        logger.debug("[DOWNSTREAM] Trained | arch: %s | epochs: %d | loss: %.3e", model.arch.value, epochs, losses[-1])
    return DownstreamRun(params=model, losses=losses)


def embed(model: GcnParams, graph: SparseGraph) -> np.ndarray:
    """Frozen forward pass of `model` over the original graph."""
    a_hat = normalize(graph, OperatorKind.GCN_ADJACENCY)
    return relay_forward(model, a_hat, graph.features).values
