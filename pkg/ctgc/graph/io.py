# ---
# File: ctgc/graph/io.py
# Purpose: Load an original graph from an edge list, a CTGF feature matrix
#          (CSV accepted as fallback) and an optional label file; write the
#          same layout back out for fixtures.
# ---

import logging
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import sparse

from ctgc.errors import FormatError, IndexOutOfRange, InvalidValue, ShapeMismatch
from ctgc.graph.models import SparseGraph
from ctgc.utils.binary import FEATURE_MAGIC, read_bytes, decode_features, write_features

logger = logging.getLogger(__name__)


# ---
# Parse "u v [w]" lines. '#' starts a comment; blank lines are skipped.
# ---
def read_edge_list(edge_path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows, cols, weights = [], [], []
    with open(edge_path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise FormatError("Edge line must be 'u v' or 'u v w'", {"file": str(edge_path), "line": line_no})
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise FormatError("Unparseable edge line", {"file": str(edge_path), "line": line_no})
            if u < 0 or v < 0:
                raise IndexOutOfRange("Negative node index", {"file": str(edge_path), "line": line_no})
            if not np.isfinite(w) or w < 0:
                raise InvalidValue("Edge weight must be finite and nonnegative", {"line": line_no, "weight": w})
            rows.append(u)
            cols.append(v)
            weights.append(w)
    return (
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
    )


def read_feature_matrix(feature_path: Path) -> np.ndarray:
    data = read_bytes(feature_path)
    if data[:4] == FEATURE_MAGIC:
        return decode_features(data, str(feature_path))

    logger.info("[GRAPH] No CTGF magic, reading features as CSV | file: %s", feature_path)
    try:
        text = data.decode("utf-8")
        matrix = np.loadtxt(text.splitlines(), delimiter=",", dtype=np.float64, ndmin=2)
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError("Feature file is neither CTGF nor CSV", {"file": str(feature_path), "reason": str(exc)})
    if not np.all(np.isfinite(matrix)):
        raise InvalidValue("Non-finite feature value", {"file": str(feature_path)})
    return matrix.astype(np.float32)


def read_labels(label_path: Path) -> np.ndarray:
    with open(label_path, "r", encoding="utf-8") as handle:
        values = [int(line.strip()) for line in handle if line.strip()]
    return np.asarray(values, dtype=np.int64)


# ---
# Symmetrize an undirected edge list into CSR; duplicates (in either
# direction) collapse to the maximum weight.
# ---
def build_adjacency(n: int, rows: np.ndarray, cols: np.ndarray, weights: np.ndarray) -> sparse.csr_matrix:
    if rows.size == 0:
        return sparse.csr_matrix((n, n), dtype=np.float64)
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    keys = lo * n + hi
    order = np.lexsort((-weights, keys))
    keys, weights = keys[order], weights[order]
    first = np.ones(keys.size, dtype=bool)
    first[1:] = keys[1:] != keys[:-1]
    keys, weights = keys[first], weights[first]
    lo, hi = keys // n, keys % n
    off = lo != hi
    r = np.concatenate([lo, hi[off]])
    c = np.concatenate([hi, lo[off]])
    w = np.concatenate([weights, weights[off]])
    matrix = sparse.csr_matrix((w, (r, c)), shape=(n, n), dtype=np.float64)
    # zero-weight lines are not edges
    matrix.eliminate_zeros()
    return matrix


def load_graph(edge_path: Path, feature_path: Path, label_path: Optional[Path] = None) -> SparseGraph:
    """
    Build a SparseGraph from on-disk files. Node count comes from the feature
    matrix; self-loops in the edge list are dropped with a warning.

    Args:
        edge_path: Text edge list, 0-based "u v [w]"
        feature_path: CTGF binary matrix or header-free CSV
        label_path: Optional text file, one class index per line

    Returns:
        SparseGraph
    """
    features = read_feature_matrix(Path(feature_path))
    n = int(features.shape[0])
    rows, cols, weights = read_edge_list(Path(edge_path))

    if rows.size:
        top = int(max(rows.max(), cols.max()))
        if top >= n:
            raise IndexOutOfRange(
                "Edge references a node beyond the feature rows",
                {"node": top, "feature_rows": n},
            )
    loops = rows == cols
    if loops.any():
        logger.warning("[GRAPH] ⚠ Dropping self-loops from edge list | count: %d", int(loops.sum()))
        rows, cols, weights = rows[~loops], cols[~loops], weights[~loops]

    labels = None
    if label_path is not None:
        labels = read_labels(Path(label_path))
        if labels.shape[0] != n:
            raise ShapeMismatch("Label count differs from feature rows", {"labels": labels.shape[0], "feature_rows": n})

    graph = SparseGraph(n=n, adjacency=build_adjacency(n, rows, cols, weights), features=features, labels=labels)
    logger.info(
        "[GRAPH] ✓ Loaded graph | nodes: %d | edges: %d | features: %d | labelled: %s",
        graph.n, graph.edge_count, graph.feature_dim, labels is not None,
    )
    return graph


# ---
# Write a graph in the layout load_graph reads. Used by the fixture seeder.
# ---
def save_graph(graph: SparseGraph, directory: Path) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": directory / "edges.txt",
        "features": directory / "features.ctgf",
    }
    pairs, weights = graph.edges(), graph.edge_weights()
    unweighted = np.all(weights == 1.0)
    with open(paths["edges"], "w", encoding="utf-8") as handle:
        handle.write(f"# nodes: {graph.n}\n")
        for (u, v), w in zip(pairs, weights):
            handle.write(f"{u} {v}\n" if unweighted else f"{u} {v} {w:.17g}\n")
    write_features(paths["features"], graph.features)
    if graph.labels is not None:
        paths["labels"] = directory / "labels.txt"
        with open(paths["labels"], "w", encoding="utf-8") as handle:
            handle.writelines(f"{int(y)}\n" for y in graph.labels)
    return paths
