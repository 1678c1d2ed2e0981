# ---
# File: ctgc/graph/__init__.py
# Purpose: Graph representation, normalization, file IO, generators and splits
# ---

from ctgc.graph.generators import generate_sbm, knn_graph
from ctgc.graph.io import load_graph, save_graph
from ctgc.graph.models import LinkSplit, NormalizedOperator, OperatorKind, SparseGraph
from ctgc.graph.normalize import normalize
from ctgc.graph.splits import split_links

__all__ = [
    "LinkSplit",
    "NormalizedOperator",
    "OperatorKind",
    "SparseGraph",
    "generate_sbm",
    "knn_graph",
    "load_graph",
    "normalize",
    "save_graph",
    "split_links",
]
