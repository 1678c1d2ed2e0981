# ---
# File: ctgc/relay/checkpoint.py
# Purpose: CTGM model checkpoints: "CTGM", u32 kind, u32 period, u32 count,
#          count × (u32 rows, u32 cols), then the f64 parameter blobs
#          row-major in declared field order.
# ---

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ctgc.autodiff import Tensor
from ctgc.errors import FormatError
from ctgc.relay.models import Architecture, EigenMlpParams, GcnParams
from ctgc.utils.binary import pack_header, read_bytes, read_payload, unpack_header

MODEL_MAGIC = b"CTGM"

KIND_GCN = 0
KIND_SGC = 1
KIND_EIGENMLP = 2

EIGENMLP_FIELDS = ["phi_w1", "phi_w2", "phi_b2", "psi_w1", "psi_b1", "psi_w2", "psi_b2", "w_rho"]

RelayParams = Union[GcnParams, EigenMlpParams]


def _kind_of(params: RelayParams) -> tuple[int, int]:
    if isinstance(params, EigenMlpParams):
        return KIND_EIGENMLP, params.period
    return (KIND_SGC if params.arch == Architecture.SGC else KIND_GCN), 0


def save_checkpoint(path: Path, params: RelayParams) -> None:
    kind, period = _kind_of(params)
    tensors = params.parameters()
    shapes = b"".join(struct.pack("<2I", *t.shape) for t in tensors)
    blobs = b"".join(np.ascontiguousarray(t.values, dtype="<f8").tobytes() for t in tensors)
    Path(path).write_bytes(pack_header(MODEL_MAGIC, kind, period, len(tensors)) + shapes + blobs)


def load_checkpoint(path: Path) -> RelayParams:
    data = read_bytes(path)
    source = str(path)
    (kind, period, count), offset = unpack_header(data, MODEL_MAGIC, 3, source)
    expected = {KIND_GCN: 2, KIND_SGC: 1, KIND_EIGENMLP: len(EIGENMLP_FIELDS)}
    if kind not in expected or count != expected[kind]:
        raise FormatError("Unknown checkpoint kind or parameter count", {"file": source, "kind": kind, "count": count})

    shapes = read_payload(data, offset, "<u4", 2 * count, source).reshape(count, 2)
    offset += 8 * count
    arrays = []
    for rows, cols in shapes:
        size = int(rows) * int(cols)
        arrays.append(read_payload(data, offset, "<f8", size, source).reshape(int(rows), int(cols)))
        offset += 8 * size

    if kind == KIND_EIGENMLP:
        fields = {name: Tensor(value, requires_grad=True, name=name) for name, value in zip(EIGENMLP_FIELDS, arrays)}
        return EigenMlpParams(period=period, **fields)
    arch = Architecture.SGC if kind == KIND_SGC else Architecture.GCN
    return GcnParams(arch=arch, weights=[Tensor(value, requires_grad=True) for value in arrays])
