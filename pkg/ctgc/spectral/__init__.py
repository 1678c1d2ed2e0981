# ---
# File: ctgc/spectral/__init__.py
# Purpose: Extremal Laplacian eigendecomposition
# ---

from ctgc.spectral.io import load_eigensystem, save_eigensystem
from ctgc.spectral.models import EigenSystem
from ctgc.spectral.solver import band_sizes, canonicalize_signs, decompose, dense_eig, extremal_eigs

__all__ = [
    "EigenSystem",
    "band_sizes",
    "canonicalize_signs",
    "decompose",
    "dense_eig",
    "extremal_eigs",
    "load_eigensystem",
    "save_eigensystem",
]
