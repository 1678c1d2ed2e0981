# ---
# File: ctgc/spectral/io.py
# Purpose: CTGE eigensystem files: "CTGE", u32 n, u32 k1, u32 k2, then the
#          k1+k2 f64 eigenvalues and the n×(k1+k2) f64 eigenvectors
#          column-major.
# ---

from pathlib import Path
from typing import Optional

import numpy as np

from ctgc.graph.models import NormalizedOperator
from ctgc.spectral.models import EigenSystem
from ctgc.spectral.solver import residual_norms
from ctgc.utils.binary import pack_header, read_bytes, read_payload, unpack_header

EIGEN_MAGIC = b"CTGE"


def save_eigensystem(path: Path, eig: EigenSystem) -> None:
    header = pack_header(EIGEN_MAGIC, eig.n, eig.k1, eig.k2)
    values = np.ascontiguousarray(eig.eigenvalues, dtype="<f8").tobytes()
    vectors = np.asarray(eig.eigenvectors, dtype="<f8").tobytes(order="F")
    Path(path).write_bytes(header + values + vectors)


# ---
# Residuals are not part of the format; they are recomputed when the
# Laplacian is supplied.
# ---
def load_eigensystem(path: Path, laplacian: Optional[NormalizedOperator] = None) -> EigenSystem:
    data = read_bytes(path)
    (n, k1, k2), offset = unpack_header(data, EIGEN_MAGIC, 3, str(path))
    k = k1 + k2
    values = read_payload(data, offset, "<f8", k, str(path))
    offset += 8 * k
    vectors = read_payload(data, offset, "<f8", n * k, str(path)).reshape((n, k), order="F")
    residuals = None
    if laplacian is not None:
        residuals = residual_norms(laplacian.matrix, values, vectors)
    return EigenSystem(eigenvalues=values, eigenvectors=vectors, k1=k1, k2=k2, residuals=residuals)
