# ---
# File: ctgc/evaluation/tasks.py
# Purpose: Downstream heads on frozen embeddings: few-shot node
#          classification, link prediction and k-means clustering.
# ---

import logging
from typing import Optional

import numpy as np
from scipy.special import expit
from sklearn.metrics import normalized_mutual_info_score, roc_auc_score

from ctgc.autodiff import AdamState, Tape, Tensor, adam_step, backward
from ctgc.autodiff import ops
from ctgc.condensation.kmeans import kmeans
from ctgc.errors import InsufficientLabels, ShapeMismatch
from ctgc.evaluation.models import FewShotSplit
from ctgc.graph.models import LinkSplit, SparseGraph
from ctgc.graph.splits import pair_keys, sample_non_edges
from ctgc.relay.models import glorot, zeros_row

logger = logging.getLogger(__name__)


def _unit_rows(emb: np.ndarray) -> np.ndarray:
    emb = np.asarray(emb, dtype=np.float64)
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    return emb / np.maximum(norms, 1e-12)


def sample_fewshot(labels: np.ndarray, shots: int, seed: int) -> FewShotSplit:
    """`shots` random nodes per class for training; every other labelled node is test."""
    labels = np.asarray(labels, dtype=np.int64)
    rng = np.random.default_rng(seed)
    train = []
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        if members.size < shots:
            raise InsufficientLabels(
                "Class has fewer labelled nodes than shots",
                {"class": int(cls), "available": int(members.size), "shots": shots},
            )
        train.append(rng.choice(members, size=shots, replace=False))
    train_ids = np.sort(np.concatenate(train))
    test_ids = np.setdiff1d(np.arange(labels.size), train_ids)
    return FewShotSplit(shots=shots, train_ids=train_ids, test_ids=test_ids)


def train_softmax_head(emb: np.ndarray, labels: np.ndarray, num_classes: int, epochs: int, lr: float, seed: int):
    rng = np.random.default_rng(seed)
    weight = glorot(rng, emb.shape[1], num_classes, "head.w")
    bias = zeros_row(num_classes, "head.b")
    params = [weight, bias]
    state = AdamState.for_params(params, lr)
    x = Tensor(emb)
    for _ in range(epochs):
        with Tape() as tape:
            loss = ops.cross_entropy(ops.add(ops.matmul(x, weight), bias), labels)
        backward(tape, loss)
        adam_step(params, None, state)
        weight.zero_grad()
        bias.zero_grad()
    return weight.values, bias.values


def eval_nc_fewshot(
    emb: np.ndarray,
    labels: np.ndarray,
    shots: int,
    head_epochs: int,
    seed: int,
    lr: float = 0.01,
) -> float:
    """
    Few-shot node classification accuracy of a linear softmax head on
    row-normalized embeddings.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if emb.shape[0] != labels.shape[0]:
        raise ShapeMismatch("One label per embedding row is required", {"rows": emb.shape[0], "labels": labels.shape[0]})
    split = sample_fewshot(labels, shots, seed)
    x = _unit_rows(emb)
    num_classes = int(labels.max()) + 1
    weight, bias = train_softmax_head(x[split.train_ids], labels[split.train_ids], num_classes, head_epochs, lr, seed)
    predictions = np.argmax(x[split.test_ids] @ weight + bias, axis=1)
    return float(np.mean(predictions == labels[split.test_ids]))


def auc(positive_scores: np.ndarray, negative_scores: np.ndarray) -> float:
    """ROC AUC of positives against negatives; tied scores earn half credit."""
    scores = np.concatenate([positive_scores, negative_scores])
    truth = np.concatenate([np.ones(len(positive_scores)), np.zeros(len(negative_scores))])
    return float(roc_auc_score(truth, scores))


def _pair_features(emb: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    return emb[pairs[:, 0]] * emb[pairs[:, 1]]


def link_scores(emb: np.ndarray, pairs: np.ndarray, weight: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """σ(wᵀ(h_u ⊙ h_v) + b)"""
    return expit(_pair_features(emb, pairs) @ weight + bias).reshape(-1)


# ---
# Hadamard logistic head trained on the 100 training links. Negatives are
# the split's training negatives on the first epoch, then resampled each
# epoch against the message graph. Only training inputs are read here; a
# snapshot of the head is kept every `eval_every` epochs.
# ---
def train_lp_head(
    emb: np.ndarray,
    train_links: np.ndarray,
    train_negatives: np.ndarray,
    message_graph: SparseGraph,
    epochs: int,
    lr: float,
    seed: int,
    eval_every: int = 10,
) -> list[tuple[int, np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    weight = glorot(rng, emb.shape[1], 1, "lp.w")
    bias = zeros_row(1, "lp.b")
    params = [weight, bias]
    state = AdamState.for_params(params, lr)
    edge_keys = pair_keys(message_graph.edges(), message_graph.n)
    targets = np.concatenate([np.ones((len(train_links), 1)), np.zeros((len(train_links), 1))])

    snapshots = []
    negatives = train_negatives
    for epoch in range(epochs):
        if epoch > 0:
            negatives = sample_non_edges(message_graph.n, edge_keys, len(train_links), rng)
        pairs = np.concatenate([train_links, negatives])
        with Tape() as tape:
            logits = ops.add(ops.matmul(Tensor(_pair_features(emb, pairs)), weight), bias)
            loss = ops.bce_with_logits(logits, targets)
        backward(tape, loss)
        adam_step(params, None, state)
        weight.zero_grad()
        bias.zero_grad()
        if (epoch + 1) % eval_every == 0 or epoch + 1 == epochs:
            snapshots.append((epoch + 1, weight.numpy(), bias.numpy()))
    return snapshots


def eval_lp(
    emb: np.ndarray,
    split: LinkSplit,
    head_epochs: int,
    seed: int,
    lr: float = 0.01,
    eval_every: int = 10,
) -> float:
    """
    Train the link head, keep the snapshot with the best validation AUC
    (earliest on ties) and report its test AUC.
    """
    x = _unit_rows(emb)
    snapshots = train_lp_head(
        x, split.train_links, split.train_negatives, split.message_graph, head_epochs, lr, seed, eval_every,
    )
    val_links, val_negatives = split.val_links, split.val_negatives
    best_auc, best = -1.0, snapshots[-1]
    for snapshot in snapshots:
        _, weight, bias = snapshot
        score = auc(link_scores(x, val_links, weight, bias), link_scores(x, val_negatives, weight, bias))
        if score > best_auc:
            best_auc, best = score, snapshot
    epoch, weight, bias = best
    test = auc(link_scores(x, split.test_links, weight, bias), link_scores(x, split.test_negatives, weight, bias))
    logger.debug("[EVAL] LP head | selected epoch: %d | val AUC: %.4f | test AUC: %.4f", epoch, best_auc, test)
    return test


def nmi(labels_true: np.ndarray, labels_pred: np.ndarray) -> float:
    """Normalized mutual information with arithmetic-mean normalization."""
    return float(normalized_mutual_info_score(labels_true, labels_pred, average_method="arithmetic"))


def eval_clustering(emb: np.ndarray, labels: np.ndarray, seed: int, k: Optional[int] = None) -> float:
    labels = np.asarray(labels, dtype=np.int64)
    k = k or int(np.unique(labels).size)
    assignment = kmeans(_unit_rows(emb), k, seed)
    return nmi(labels, assignment.labels)
