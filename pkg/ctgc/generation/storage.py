# ---
# File: ctgc/generation/storage.py
# Purpose: Condensed graph directory: adjacency.ctgf-dense (CTGA),
#          features.ctgf and proxy_labels.ctgf (CTGF), provenance.json.
# ---

import json
import logging
from pathlib import Path

from ctgc.errors import FormatError
from ctgc.generation.models import CondensedGraph
from ctgc.utils.binary import read_dense_adjacency, read_features, write_dense_adjacency, write_features

logger = logging.getLogger(__name__)

ADJACENCY_FILE = "adjacency.ctgf-dense"
FEATURES_FILE = "features.ctgf"
PROXY_FILE = "proxy_labels.ctgf"
PROVENANCE_FILE = "provenance.json"


def save_condensed(cg: CondensedGraph, directory: Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_dense_adjacency(directory / ADJACENCY_FILE, cg.adjacency)
    write_features(directory / FEATURES_FILE, cg.features)
    write_features(directory / PROXY_FILE, cg.proxy_labels)
    (directory / PROVENANCE_FILE).write_text(json.dumps(cg.provenance, indent=2, sort_keys=True), encoding="utf-8")
    logger.info("[GENERATE] ✓ Condensed graph written | dir: %s | nodes: %d | edges: %d", directory, cg.n_prime, cg.edge_count)
    return directory


def load_condensed(directory: Path) -> CondensedGraph:
    directory = Path(directory)
    provenance_path = directory / PROVENANCE_FILE
    if not provenance_path.is_file():
        raise FormatError("Missing artifact file", {"file": str(provenance_path)})
    try:
        provenance = json.loads(provenance_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError("Unreadable provenance", {"file": str(provenance_path), "reason": str(exc)})
    return CondensedGraph(
        adjacency=read_dense_adjacency(directory / ADJACENCY_FILE),
        features=read_features(directory / FEATURES_FILE),
        proxy_labels=read_features(directory / PROXY_FILE),
        provenance=provenance,
    )


def directory_size(directory: Path) -> int:
    return sum(path.stat().st_size for path in Path(directory).iterdir() if path.is_file())
