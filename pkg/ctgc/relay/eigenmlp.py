# ---
# File: ctgc/relay/eigenmlp.py
# Purpose: Structural relay model g(Λ′, U′) = Ũ′ · ρ(Λ′), with sign-invariant
#          row encoding Ũ′ = ψ(φ(u) + φ(-u)) and Fourier eigenvalue features.
# ---

import numpy as np

from ctgc.autodiff import Tensor
from ctgc.autodiff import ops
from ctgc.errors import InvalidConfig, ShapeMismatch
from ctgc.relay.models import EigenMlpParams
from ctgc.spectral.models import EigenSystem


def fourier_features(eigenvalues, period: int, w_rho: Tensor) -> Tensor:
    """
    Row i = [sin(λi), cos(λi), ..., sin(Tλi), cos(Tλi)] · W_ρ.

    Args:
        eigenvalues: m eigenvalues
        period: T
        w_rho: 2T × d_emb weight

    Returns:
        m × d_emb tensor
    """
    lam = Tensor(np.asarray(eigenvalues, dtype=np.float64).reshape(-1, 1))
    if lam.shape[0] < 1 or period < 1:
        raise InvalidConfig("Fourier features need m >= 1 and T >= 1", {"m": lam.shape[0], "period": period})
    if w_rho.shape[0] != 2 * period:
        raise ShapeMismatch("W_rho must have 2T rows", {"rows": w_rho.shape[0], "period": period})

    columns = []
    for t in range(1, period + 1):
        angle = ops.scale(lam, float(t))
        columns.append(ops.sin(angle).values)
        columns.append(ops.cos(angle).values)
    basis = np.hstack(columns)
    return ops.matmul(Tensor(basis), w_rho)


def _phi(p: EigenMlpParams, u: Tensor) -> Tensor:
    return ops.add(ops.matmul(ops.relu(ops.matmul(u, p.phi_w1)), p.phi_w2), p.phi_b2)


def _psi(p: EigenMlpParams, y: Tensor) -> Tensor:
    hidden = ops.relu(ops.add(ops.matmul(y, p.psi_w1), p.psi_b1))
    return ops.add(ops.matmul(hidden, p.psi_w2), p.psi_b2)


def sign_invariant_encode(u_prime, p: EigenMlpParams) -> Tensor:
    """Ũ row i = ψ(φ(u_i) + φ(-u_i)) over the positional-embedding row u_i."""
    u = u_prime if isinstance(u_prime, Tensor) else Tensor(u_prime)
    if u.values.ndim != 2 or u.shape[1] != p.n_prime:
        raise ShapeMismatch("Positional embeddings must have N′ columns", {"shape": u.shape, "n_prime": p.n_prime})
    return _psi(p, ops.add(_phi(p, u), _phi(p, ops.scale(u, -1.0))))


def eigenmlp_apply(p: EigenMlpParams, eigenvalues, u_prime) -> Tensor:
    """Z = sign_invariant_encode(U′) · fourier_features(Λ′); differentiable in p and U′."""
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64).reshape(-1)
    if eigenvalues.shape[0] != p.n_prime:
        raise ShapeMismatch("Eigenvalue count differs from N′", {"eigenvalues": eigenvalues.shape[0], "n_prime": p.n_prime})
    encoded = sign_invariant_encode(u_prime, p)
    return ops.matmul(encoded, fourier_features(eigenvalues, p.period, p.w_rho))


def eigenmlp_forward(p: EigenMlpParams, eig: EigenSystem) -> Tensor:
    return eigenmlp_apply(p, eig.eigenvalues, eig.eigenvectors)


def column_flip_gap(p: EigenMlpParams, eigenvalues, u_prime, columns) -> float:
    """
    Relative change ||g(Λ′, U′D) - g(Λ′, U′)||_F / ||g(Λ′, U′)||_F, with D
    negating the listed eigenvector columns. The row-wise encoding is exact
    for the global flip; for a proper subset of columns this measures the gap.
    """
    u = np.asarray(u_prime.values if isinstance(u_prime, Tensor) else u_prime, dtype=np.float64)
    signs = np.ones(u.shape[1])
    columns = list(columns)
    if any(c < 0 or c >= u.shape[1] for c in columns):
        raise InvalidConfig("Flipped column out of range", {"columns": columns, "width": u.shape[1]})
    signs[columns] = -1.0
    base = eigenmlp_apply(p, eigenvalues, u).values
    flipped = eigenmlp_apply(p, eigenvalues, u * signs[None, :]).values
    return float(np.linalg.norm(flipped - base) / max(np.linalg.norm(base), 1e-12))
