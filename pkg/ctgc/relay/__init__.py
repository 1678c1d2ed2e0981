# ---
# File: ctgc/relay/__init__.py
# Purpose: Semantic (GCN/SGC) and structural (EigenMLP) relay models
# ---

from ctgc.relay.checkpoint import load_checkpoint, save_checkpoint
from ctgc.relay.eigenmlp import column_flip_gap, eigenmlp_apply, eigenmlp_forward, fourier_features, sign_invariant_encode
from ctgc.relay.gcn import gcn_forward, relay_forward, sgc_forward
from ctgc.relay.models import Architecture, EigenMlpParams, GcnParams

__all__ = [
    "Architecture",
    "EigenMlpParams",
    "GcnParams",
    "column_flip_gap",
    "eigenmlp_apply",
    "eigenmlp_forward",
    "fourier_features",
    "gcn_forward",
    "load_checkpoint",
    "relay_forward",
    "save_checkpoint",
    "sgc_forward",
]
