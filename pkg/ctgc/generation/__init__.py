# ---
# File: ctgc/generation/__init__.py
# Purpose: Condensed graph synthesis by model inversion
# ---

from ctgc.generation.inversion import (
    invert_attributes,
    invert_eigenvectors,
    raw_adjacency,
    reconstruct_adjacency,
)
from ctgc.generation.models import CondensedGraph, InversionConfig, InversionResult
from ctgc.generation.statistics import GraphStatistics, adjacency_statistics
from ctgc.generation.storage import load_condensed, save_condensed
from ctgc.generation.synthesis import Structure, generate_condensed

__all__ = [
    "CondensedGraph",
    "GraphStatistics",
    "InversionConfig",
    "InversionResult",
    "Structure",
    "adjacency_statistics",
    "generate_condensed",
    "invert_attributes",
    "invert_eigenvectors",
    "load_condensed",
    "raw_adjacency",
    "reconstruct_adjacency",
    "save_condensed",
]
