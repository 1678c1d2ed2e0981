# ---
# File: ctgc/spectral/solver.py
# Purpose: Extremal eigenpairs of the normalized Laplacian. Dense LAPACK for
#          small graphs (also the oracle), Lanczos with full
#          reorthogonalization otherwise. The smallest band is computed as
#          the largest band of 2I - L and mapped back.
# ---

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import linalg, sparse

from ctgc.errors import InvalidConfig, NotSymmetric, SolverDiverged
from ctgc.graph.models import NormalizedOperator, OperatorKind, asymmetry
from ctgc.spectral.models import EigenSystem

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DENSE_AUTO_LIMIT = 2000
DENSE_ORACLE_LIMIT = 4000
SYMMETRY_TOL = 1e-9
CHECK_EVERY = 5
BREAKDOWN_TOL = 1e-12

MatVec = Callable[[np.ndarray], np.ndarray]


def band_sizes(n_prime: int) -> tuple[int, int]:
    """K1 = round(0.9·N′) with halves rounded up; K2 = N′ - K1."""
    k1 = int(math.floor(0.9 * n_prime + 0.5))
    return k1, n_prime - k1


def max_iterations(k1: int, k2: int) -> int:
    return 10 * (k1 + k2) + 200


# ---
# Flip every column so its largest-magnitude entry is positive; among equal
# magnitudes the lowest row index decides. Idempotent.
# ---
def canonicalize_signs(vectors: np.ndarray) -> np.ndarray:
    vectors = np.array(vectors, dtype=np.float64, copy=True)
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs[None, :]


def residual_norms(matrix, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    if vectors.shape[1] == 0:
        return np.zeros(0)
    return np.linalg.norm(matrix @ vectors - vectors * values[None, :], axis=0)


def _as_matrix(operator) -> sparse.csr_matrix:
    if isinstance(operator, NormalizedOperator):
        return operator.matrix
    if sparse.issparse(operator):
        return sparse.csr_matrix(operator, dtype=np.float64)
    return sparse.csr_matrix(np.asarray(operator, dtype=np.float64))


def _check_symmetric(matrix) -> None:
    gap = asymmetry(matrix) if sparse.issparse(matrix) else float(np.max(np.abs(matrix - matrix.T), initial=0.0))
    if gap > SYMMETRY_TOL:
        raise NotSymmetric("Operator is not symmetric", {"max_asymmetry": gap})


def dense_eig(laplacian) -> EigenSystem:
    """
    Full ascending spectrum via LAPACK. Serves as the oracle for the
    iterative solver.

    Args:
        laplacian: Symmetric matrix (dense, CSR, or NormalizedOperator), n <= 4000

    Returns:
        EigenSystem with k1 = n, k2 = 0
    """
    if isinstance(laplacian, NormalizedOperator):
        dense = laplacian.dense()
    elif sparse.issparse(laplacian):
        dense = laplacian.toarray()
    else:
        dense = np.asarray(laplacian, dtype=np.float64)
    n = dense.shape[0]
    if n > DENSE_ORACLE_LIMIT:
        raise InvalidConfig("Dense eigensolver is limited to n <= 4000", {"n": n})
    _check_symmetric(dense)

    values, vectors = linalg.eigh(0.5 * (dense + dense.T))
    vectors = canonicalize_signs(vectors)
    return EigenSystem(
        eigenvalues=values,
        eigenvectors=vectors,
        k1=n,
        k2=0,
        residuals=residual_norms(dense, values, vectors),
    )


def _orthogonalize(w: np.ndarray, basis: Optional[np.ndarray]) -> np.ndarray:
    if basis is None or basis.shape[1] == 0:
        return w
    return w - basis @ (basis.T @ w)


def _random_start(n: int, rng: np.random.Generator, *bases: Optional[np.ndarray]) -> Optional[np.ndarray]:
    for _ in range(10):
        q = rng.standard_normal(n)
        for _ in range(2):
            for basis in bases:
                q = _orthogonalize(q, basis)
        norm = np.linalg.norm(q)
        if norm > 1e-8:
            return q / norm
    return None


# ---
# One Krylov run for the `k` largest eigenpairs of a symmetric operator,
# restricted to the orthogonal complement of `deflate`. Full
# reorthogonalization against the basis and the deflation set; after an
# invariant subspace breakdown the run continues from a fresh random
# direction, so repeated eigenvalues are reachable within one run.
# Returns (values, vectors, residuals, steps), best Ritz pairs so far.
# ---
def _krylov_largest(
    matvec: MatVec,
    n: int,
    k: int,
    tol: float,
    cap: int,
    rng: np.random.Generator,
    deflate: Optional[np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    locked_dim = 0 if deflate is None else deflate.shape[1]
    space = n - locked_dim
    steps_max = min(cap, space)
    basis = np.zeros((n, steps_max))
    alphas = np.zeros(steps_max)
    betas = np.zeros(steps_max)

    q = _random_start(n, rng, deflate)
    best = (np.zeros(0), np.zeros((n, 0)), np.zeros(0))
    if q is None or steps_max == 0:
        return (*best, 0)

    for j in range(steps_max):
        basis[:, j] = q
        w = _orthogonalize(matvec(q), deflate)
        alphas[j] = float(q @ w)
        w = w - alphas[j] * q
        if j > 0:
            w = w - betas[j - 1] * basis[:, j - 1]
        for _ in range(2):
            w = _orthogonalize(w, basis[:, : j + 1])
            w = _orthogonalize(w, deflate)
        beta = float(np.linalg.norm(w))
        steps = j + 1
        exhausted = steps == steps_max
        breakdown = beta < BREAKDOWN_TOL

        if steps >= k and (steps % CHECK_EVERY == 0 or exhausted or breakdown):
            theta, s = linalg.eigh_tridiagonal(alphas[:steps], betas[: steps - 1])
            top = np.argsort(-theta, kind="stable")[:k]
            values = theta[top]
            vectors = basis[:, :steps] @ s[:, top]
            vectors /= np.linalg.norm(vectors, axis=0, keepdims=True)
            applied = np.column_stack([_orthogonalize(matvec(vectors[:, i]), deflate) for i in range(k)])
            residuals = np.linalg.norm(applied - vectors * values[None, :], axis=0)
            best = (values, vectors, residuals)
            if np.all(residuals <= tol):
                return (*best, steps)

        if exhausted:
            break
        if breakdown:
            fresh = _random_start(n, rng, basis[:, :steps], deflate)
            if fresh is None:
                break
            betas[j] = 0.0
            q = fresh
        else:
            betas[j] = beta
            q = w / beta

    return (*best, steps_max)


# ---
# The `k` largest eigenpairs: repeated Krylov runs lock converged pairs and
# restart deflated against them; a final deflated run checks that no copy of
# a repeated eigenvalue above the locked minimum was missed.
# ---
def lanczos_largest(
    matvec: MatVec,
    n: int,
    k: int,
    tol: float = DEFAULT_TOL,
    cap: Optional[int] = None,
    seed: int = 0,
    deflate: Optional[np.ndarray] = None,
    band: str = "largest",
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if k == 0:
        return np.zeros(0), np.zeros((n, 0)), np.zeros(0)
    cap = cap or max_iterations(k, 0)
    rng = np.random.default_rng(seed)
    extra = np.zeros((n, 0)) if deflate is None else deflate

    values = np.zeros(0)
    vectors = np.zeros((n, 0))
    residuals = np.zeros(0)
    total_steps = 0

    while values.size < k:
        need = k - values.size
        theta, y, res, steps = _krylov_largest(matvec, n, need, tol, cap, rng, np.hstack([extra, vectors]))
        total_steps += steps
        converged = res <= tol
        if not np.any(converged):
            raise SolverDiverged(
                "Lanczos did not converge within the iteration cap",
                {"band": band, "iterations": steps, "cap": cap, "locked": int(values.size),
                 "max_residual": float(res.max()) if res.size else None, "tol": tol},
            )
        values = np.concatenate([values, theta[converged]])
        vectors = np.hstack([vectors, y[:, converged]])
        residuals = np.concatenate([residuals, res[converged]])

    # Missed multiplicities surface as a deflated eigenvalue above the locked minimum
    for _ in range(k):
        if values.size + extra.shape[1] >= n:
            break
        theta, y, res, steps = _krylov_largest(matvec, n, 1, tol, cap, rng, np.hstack([extra, vectors]))
        total_steps += steps
        if theta.size == 0 or res[0] > tol or theta[0] <= values.min() + 10.0 * tol:
            break
        logger.info("[LANCZOS] ⚠ Recovered missed eigenvalue | band: %s | value: %.6g", band, float(theta[0]))
        drop = int(np.argmin(values))
        keep = np.arange(values.size) != drop
        values = np.concatenate([values[keep], theta])
        vectors = np.hstack([vectors[:, keep], y])
        residuals = np.concatenate([residuals[keep], res])

    order = np.argsort(-values, kind="stable")
    logger.info(
        "[LANCZOS] ✓ Converged | band: %s | pairs: %d | iterations: %d | max residual: %.2e",
        band, k, total_steps, float(residuals.max()),
    )
    return values[order], vectors[:, order], residuals[order]


def extremal_eigs(
    laplacian,
    k1: int,
    k2: int,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> EigenSystem:
    """
    K1 smallest and K2 largest eigenpairs by Lanczos.

    Args:
        laplacian: NormalizedOperator of kind laplacian (spectrum within [0, 2])
        k1: Number of smallest eigenpairs
        k2: Number of largest eigenpairs
        tol: Residual tolerance ||Lv - λv||_2
        seed: Seed for the starting vectors

    Returns:
        EigenSystem with canonicalized eigenvector signs
    """
    if isinstance(laplacian, NormalizedOperator) and laplacian.kind != OperatorKind.LAPLACIAN:
        raise InvalidConfig("extremal_eigs needs a Laplacian operator", {"kind": laplacian.kind.value})
    matrix = _as_matrix(laplacian)
    n = matrix.shape[0]
    if k1 < 0 or k2 < 0 or k1 + k2 > n:
        raise InvalidConfig("Need 0 <= k1, k2 and k1 + k2 <= n", {"k1": k1, "k2": k2, "n": n})
    if tol <= 0:
        raise InvalidConfig("Tolerance must be positive", {"tol": tol})
    _check_symmetric(matrix)
    cap = max_iterations(k1, k2)

    top_values, top_vectors, top_res = lanczos_largest(
        lambda x: matrix @ x, n, k2, tol, cap, seed, band="largest",
    )
    flipped_values, low_vectors, low_res = lanczos_largest(
        lambda x: 2.0 * x - matrix @ x, n, k1, tol, cap, seed + 1, deflate=top_vectors, band="smallest",
    )

    low_values = 2.0 - flipped_values
    low_order = np.argsort(low_values, kind="stable")
    top_order = np.argsort(top_values, kind="stable")
    values = np.concatenate([low_values[low_order], top_values[top_order]])
    vectors = np.hstack([low_vectors[:, low_order], top_vectors[:, top_order]])
    vectors = canonicalize_signs(vectors)
    residuals = residual_norms(matrix, values, vectors)
    return EigenSystem(
        eigenvalues=np.clip(values, 0.0, 2.0),
        eigenvectors=vectors,
        k1=k1,
        k2=k2,
        residuals=residuals,
    )


def select_bands(full: EigenSystem, k1: int, k2: int) -> EigenSystem:
    """Slice the K1 smallest and K2 largest pairs out of a full spectrum."""
    n = full.size
    if k1 + k2 > n:
        raise InvalidConfig("k1 + k2 exceeds the spectrum size", {"k1": k1, "k2": k2, "n": n})
    index = np.concatenate([np.arange(k1), np.arange(n - k2, n)]).astype(int)
    return EigenSystem(
        eigenvalues=np.clip(full.eigenvalues[index], 0.0, 2.0),
        eigenvectors=full.eigenvectors[:, index],
        k1=k1,
        k2=k2,
        residuals=None if full.residuals is None else full.residuals[index],
    )


# ---
# Solver entry point used by the pipeline: dense when n <= 2000,
# Lanczos otherwise.
# ---
def decompose(laplacian: NormalizedOperator, k1: int, k2: int, tol: float = DEFAULT_TOL, seed: int = 0) -> EigenSystem:
    n = laplacian.n
    if n <= DENSE_AUTO_LIMIT:
        logger.info("[SPECTRAL] Dense path | nodes: %d | k1: %d | k2: %d", n, k1, k2)
        return select_bands(dense_eig(laplacian), k1, k2)
    logger.info("[SPECTRAL] Lanczos path | nodes: %d | k1: %d | k2: %d | tol: %.0e", n, k1, k2, tol)
    return extremal_eigs(laplacian, k1, k2, tol, seed)
