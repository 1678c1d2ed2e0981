# ---
# File: ctgc/utils/binary.py
# Purpose: Little-endian binary codecs shared by the artifact formats
#          (CTGF feature matrices, CTGA dense adjacency, and the header helpers
#          used by the CTGE eigensystem and CTGM checkpoint files).
# ---

from pathlib import Path
import struct

import numpy as np

from ctgc.errors import FormatError, ShapeMismatch

FEATURE_MAGIC = b"CTGF"
ADJACENCY_MAGIC = b"CTGA"


# ---
# Pack a 4-byte magic followed by little-endian u32 header fields.
# ---
def pack_header(magic: bytes, *fields: int) -> bytes:
    return magic + struct.pack(f"<{len(fields)}I", *fields)


# ---
# Validate the magic of a binary blob and unpack `count` u32 header fields.
# Returns the header tuple and the byte offset where the payload starts.
# ---
def unpack_header(data: bytes, magic: bytes, count: int, source: str = "<bytes>") -> tuple[tuple[int, ...], int]:
    header_size = 4 + 4 * count
    if len(data) < header_size:
        raise FormatError("Truncated header", {"file": source, "expected_bytes": header_size})
    if data[:4] != magic:
        raise FormatError(
            "Unexpected magic bytes",
            {"file": source, "expected": magic.decode(), "found": data[:4].hex()},
        )
    return struct.unpack(f"<{count}I", data[4:header_size]), header_size


# ---
# Decode `count` little-endian values of `dtype` from a payload,
# raising FormatError when the payload length disagrees with the header.
# ---
def read_payload(data: bytes, offset: int, dtype: str, count: int, source: str = "<bytes>") -> np.ndarray:
    item = np.dtype(dtype).itemsize
    available = len(data) - offset
    if available < count * item:
        raise FormatError(
            "Payload shorter than header declares",
            {"file": source, "expected_bytes": count * item, "available_bytes": available},
        )
    return np.frombuffer(data, dtype=dtype, count=count, offset=offset).copy()


def read_bytes(path: Path) -> bytes:
    path = Path(path)
    if not path.is_file():
        raise FormatError("Missing artifact file", {"file": str(path)})
    return path.read_bytes()


# ---
# CTGF: "CTGF", u32 n, u32 d, then n·d f32 row-major.
# ---
def encode_features(matrix: np.ndarray) -> bytes:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2:
        raise ShapeMismatch("Feature matrix must be two-dimensional", {"ndim": matrix.ndim})
    n, d = matrix.shape
    return pack_header(FEATURE_MAGIC, n, d) + matrix.tobytes(order="C")


def decode_features(data: bytes, source: str = "<bytes>") -> np.ndarray:
    (n, d), offset = unpack_header(data, FEATURE_MAGIC, 2, source)
    values = read_payload(data, offset, "<f4", n * d, source)
    return values.reshape(n, d).astype(np.float32)


def write_features(path: Path, matrix: np.ndarray) -> None:
    Path(path).write_bytes(encode_features(matrix))


def read_features(path: Path) -> np.ndarray:
    return decode_features(read_bytes(path), str(path))


# ---
# CTGA: "CTGA", u32 N', then N'·N' f64 row-major.
# ---
def write_dense_adjacency(path: Path, adjacency: np.ndarray) -> None:
    adjacency = np.ascontiguousarray(adjacency, dtype="<f8")
    if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
        raise ShapeMismatch("Dense adjacency must be square", {"shape": adjacency.shape})
    Path(path).write_bytes(pack_header(ADJACENCY_MAGIC, adjacency.shape[0]) + adjacency.tobytes(order="C"))


def read_dense_adjacency(path: Path) -> np.ndarray:
    data = read_bytes(path)
    (n,), offset = unpack_header(data, ADJACENCY_MAGIC, 1, str(path))
    return read_payload(data, offset, "<f8", n * n, str(path)).reshape(n, n).astype(np.float64)
