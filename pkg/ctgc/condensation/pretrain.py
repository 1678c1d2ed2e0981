# ---
# File: ctgc/condensation/pretrain.py
# Purpose: Shuffle-discrimination pretraining of the semantic relay model.
#          A disposable linear head learns to tell embeddings of the real
#          graph from embeddings computed on row-shuffled features.
# ---

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from ctgc.autodiff import AdamState, Tape, Tensor, adam_step, backward
from ctgc.autodiff import ops
from ctgc.errors import InvalidConfig
from ctgc.graph.models import NormalizedOperator, OperatorKind, SparseGraph
from ctgc.graph.normalize import normalize
from ctgc.relay.gcn import relay_forward
from ctgc.relay.models import GcnParams, glorot, zeros_row

logger = logging.getLogger(__name__)


class DiscriminatorRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: GcnParams
    head_accuracy: float
    losses: list[float]


def _head_logits(emb: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    return ops.add(ops.matmul(emb, weight), bias)


def train_discriminator(
    f: GcnParams,
    a_hat: NormalizedOperator,
    features: np.ndarray,
    m_pre: int,
    lr_pre: float,
    seed: int,
) -> DiscriminatorRun:
    """
    Train f jointly with a linear head on real (label 1) vs shuffled
    (label 0) embeddings using binary cross-entropy. The row permutation is
    drawn once from the seed.

    Returns:
        DiscriminatorRun with f, the head's final training accuracy and the
        per-epoch losses
    """
    if m_pre < 1:
        raise InvalidConfig("m_pre must be at least 1", {"m_pre": m_pre})
    rng = np.random.default_rng(seed)
    x = Tensor(features)
    shuffled = Tensor(np.asarray(features)[rng.permutation(features.shape[0])])
    n = features.shape[0]
    targets = np.concatenate([np.ones((n, 1)), np.zeros((n, 1))])

    weight = glorot(rng, f.emb_dim, 1, "head.w")
    bias = zeros_row(1, "head.b")
    params = f.parameters() + [weight, bias]
    state = AdamState.for_params(params, lr_pre)

    losses = []
    for epoch in range(m_pre):
        with Tape() as tape:
            real = relay_forward(f, a_hat, x)
            fake = relay_forward(f, a_hat, shuffled)
            logits = ops.concat_rows([_head_logits(real, weight, bias), _head_logits(fake, weight, bias)])
            loss = ops.bce_with_logits(logits, targets)
        backward(tape, loss)
        adam_step(params, None, state)
        for p in params:
            p.zero_grad()
        losses.append(loss.item())
        if (epoch + 1) % 50 == 0:
            logger.debug("[PRETRAIN] Epoch %d | loss: %.6f", epoch + 1, losses[-1])

    real = relay_forward(f, a_hat, x)
    fake = relay_forward(f, a_hat, shuffled)
    scores = np.vstack([_head_logits(real, weight, bias).values, _head_logits(fake, weight, bias).values])
    accuracy = float(np.mean((scores > 0).astype(float) == targets))
    logger.info("[PRETRAIN] ✓ Shuffle discrimination | epochs: %d | loss: %.4f | head accuracy: %.3f", m_pre, losses[-1], accuracy)
    return DiscriminatorRun(params=f, head_accuracy=accuracy, losses=losses)


def pretrain_semantic(
    f: GcnParams,
    graph: SparseGraph,
    m_pre: int,
    lr_pre: float,
    seed: int,
    a_hat: NormalizedOperator = None,
) -> GcnParams:
    """Shuffle pretraining on the graph; the discriminator head is discarded."""
    if a_hat is None:
        a_hat = normalize(graph, OperatorKind.GCN_ADJACENCY)
    return train_discriminator(f, a_hat, graph.features, m_pre, lr_pre, seed).params
