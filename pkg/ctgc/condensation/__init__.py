# ---
# File: ctgc/condensation/__init__.py
# Purpose: Contrastive surrogate task and alternating branch optimization
# ---

from ctgc.condensation.alternating import alternating_optimize, semantic_only_optimize
from ctgc.condensation.kmeans import assign_by_similarity, cluster_means, kmeans
from ctgc.condensation.losses import centroid_separation_loss, contrastive_cluster_loss, joint_loss
from ctgc.condensation.models import (
    ClusterAssignment,
    CondensationResult,
    CondensationState,
    CondenseConfig,
    Phase,
    PhaseRecord,
)
from ctgc.condensation.pretrain import pretrain_semantic, train_discriminator
from ctgc.condensation.storage import load_state, save_state
from ctgc.condensation.training_log import TrainingLog, read_training_log

__all__ = [
    "ClusterAssignment",
    "CondensationResult",
    "CondensationState",
    "CondenseConfig",
    "Phase",
    "PhaseRecord",
    "TrainingLog",
    "alternating_optimize",
    "assign_by_similarity",
    "centroid_separation_loss",
    "cluster_means",
    "contrastive_cluster_loss",
    "joint_loss",
    "kmeans",
    "load_state",
    "pretrain_semantic",
    "read_training_log",
    "save_state",
    "semantic_only_optimize",
    "train_discriminator",
]
