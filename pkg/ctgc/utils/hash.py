# ---
# File: ctgc/utils/hash.py
# Purpose: Content hashing for pipeline caching. Stage outputs are keyed by the
#          digest of their configuration and of the upstream artifacts they read.
# ---

from pathlib import Path
import hashlib
import json
from typing import Any, Iterable

CHUNK_SIZE = 1 << 20


# ---
# Hash a file's bytes with SHA-256, streaming in 1 MiB chunks.
# ---
def hash_file(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        while chunk := handle.read(CHUNK_SIZE):
            digest.update(chunk)
    return digest.hexdigest()


# ---
# Hash every file under a directory (sorted by relative path) into one digest.
# ---
def hash_directory(path: Path) -> str:
    digest = hashlib.sha256()
    root = Path(path)
    for item in sorted(p for p in root.rglob("*") if p.is_file()):
        digest.update(str(item.relative_to(root)).encode())
        digest.update(hash_file(item).encode())
    return digest.hexdigest()


# ---
# Canonical digest of a JSON-serializable payload (sorted keys, no whitespace).
# ---
def hash_payload(payload: Any) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


def combine_hashes(parts: Iterable[str]) -> str:
    return hash_payload(list(parts))
