# ---
# File: ctgc/generation/statistics.py
# Purpose: Size statistics of original and condensed graphs (node count,
#          undirected edges, density, storage)
# ---

from pathlib import Path
from typing import Iterable

import numpy as np
from pydantic import BaseModel
from scipy import sparse

from ctgc.generation.models import CondensedGraph
from ctgc.generation.storage import directory_size
from ctgc.graph.models import SparseGraph

BYTES_PER_MB = 1024 * 1024


class GraphStatistics(BaseModel):
    nodes: int
    edges: int
    density: float
    storage_mb: float


# ---
# Density counts nonzero adjacency entries over N², so an undirected edge
# contributes twice.
# ---
def adjacency_statistics(adjacency, storage_bytes: int) -> GraphStatistics:
    n = adjacency.shape[0]
    if sparse.issparse(adjacency):
        nnz = int(sparse.csr_matrix(adjacency).count_nonzero())
        edges = int(sparse.triu(adjacency).count_nonzero())
    else:
        adjacency = np.asarray(adjacency)
        nnz = int(np.count_nonzero(adjacency))
        edges = int(np.count_nonzero(np.triu(adjacency)))
    return GraphStatistics(
        nodes=n,
        edges=edges,
        density=nnz / float(n * n) if n else 0.0,
        storage_mb=storage_bytes / BYTES_PER_MB,
    )


def original_statistics(graph: SparseGraph, files: Iterable[Path]) -> GraphStatistics:
    size = sum(Path(path).stat().st_size for path in files if path is not None and Path(path).is_file())
    return adjacency_statistics(graph.adjacency, size)


def condensed_statistics(cg: CondensedGraph, directory: Path) -> GraphStatistics:
    return adjacency_statistics(cg.adjacency, directory_size(directory))
