# ---
# File: ctgc/generation/inversion.py
# Purpose: Model inversion. Recovers condensed eigenvectors U′ through the
#          frozen structural model, rebuilds A′ = I - U′Λ′U′ᵀ, and recovers
#          attributes X′ through the frozen semantic model.
# ---

import logging
import math
from typing import Callable, Optional

import numpy as np

from ctgc.autodiff import AdamState, Tape, Tensor, adam_step, backward
from ctgc.autodiff import ops
from ctgc.errors import InversionDiverged, NumericalOverflow, ShapeMismatch
from ctgc.generation.models import InversionConfig, InversionResult
from ctgc.graph.normalize import gcn_normalize_dense
from ctgc.relay.eigenmlp import eigenmlp_apply
from ctgc.relay.gcn import relay_forward
from ctgc.relay.models import EigenMlpParams, GcnParams

logger = logging.getLogger(__name__)


def cosine_lr(base: float, step: int, total: int, floor: float = 0.0) -> float:
    """Cosine decay from `base` down to `floor · base` at `total`."""
    return base * (floor + (1.0 - floor) * 0.5 * (1.0 + math.cos(math.pi * step / total)))


def _squared_norm(a: Tensor) -> Tensor:
    return ops.sum(ops.mul(a, a))


# ---
# Adam on a single input tensor. `descent` is the differentiated loss and is
# what `history` records; the returned iterate is the lowest-loss one seen.
# ---
def _minimize(
    descent: Callable[[Tensor], Tensor],
    init: np.ndarray,
    cfg: InversionConfig,
    stage: str,
) -> tuple[np.ndarray, list[float]]:
    x = Tensor(init, requires_grad=True, name=stage)
    state = AdamState.for_params([x], cfg.lr)
    history: list[float] = []
    best_value, best_x = math.inf, x.numpy()

    try:
        for step in range(cfg.steps):
            if cfg.anneal:
                state.lr = cosine_lr(cfg.lr, step, cfg.steps, cfg.min_lr_ratio)
            with Tape() as tape:
                loss = descent(x)
            backward(tape, loss)
            value = loss.item()
            history.append(value)
            if value < best_value:
                best_value, best_x = value, x.numpy()
            adam_step([x], None, state)
            x.zero_grad()
        final = descent(x).item()
    except NumericalOverflow as exc:
        logger.error("[INVERSION] ✗ Diverged | stage: %s | step: %d", stage, len(history))
        raise InversionDiverged(f"{stage} inversion diverged", {**exc.details, "step": len(history)})

    if final <= best_value:
        best_x = x.numpy()
    return best_x, history


def orthonormal_init(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs[None, :]


def orthogonality_residual(u: np.ndarray) -> float:
    return float(np.linalg.norm(np.eye(u.shape[1]) - u.T @ u))


def eigenvector_residuals(g: EigenMlpParams, z_cent: np.ndarray, lambda_prime: np.ndarray, u: np.ndarray) -> tuple[float, float]:
    """(‖Z′ - g(Λ′, U′)‖_F, ‖I - U′ᵀU′‖_F) at a fixed U′."""
    fit = float(np.linalg.norm(z_cent - eigenmlp_apply(g, lambda_prime, u).values))
    return fit, orthogonality_residual(u)


def invert_eigenvectors(
    g: EigenMlpParams,
    z_cent: np.ndarray,
    lambda_prime: np.ndarray,
    cfg: InversionConfig,
) -> InversionResult:
    """
    Minimize ||Z′ - g(Λ′, U′)||_F + w · ||I - U′ᵀU′||_F over U′ (N′ × N′).

    Adam descends the squared terms ||·||²_F + w · ||·||²_F, which share the
    zero set and stay smooth on the orthonormal manifold. `objective` is the
    Frobenius form at the returned iterate; `history` traces the squared loss.

    Args:
        g: Trained structural model (left untouched)
        z_cent: N′ × d_emb structural centroids
        lambda_prime: The N′ eigenvalues used for the original graph
        cfg: Inversion settings

    Returns:
        InversionResult whose solution is U′, with fit and orthogonality residuals
    """
    z_cent = np.asarray(z_cent, dtype=np.float64)
    lambda_prime = np.asarray(lambda_prime, dtype=np.float64).reshape(-1)
    n_prime = lambda_prime.shape[0]
    if z_cent.shape != (n_prime, g.emb_dim) or g.n_prime != n_prime:
        raise ShapeMismatch(
            "Z′, Λ′ and the structural model disagree",
            {"z_cent": z_cent.shape, "eigenvalues": n_prime, "model_n_prime": g.n_prime, "emb_dim": g.emb_dim},
        )
    frozen = g.clone()
    frozen.freeze()
    target = Tensor(z_cent)
    identity = Tensor(np.eye(n_prime))

    def descent(u: Tensor) -> Tensor:
        fit = _squared_norm(ops.sub(target, eigenmlp_apply(frozen, lambda_prime, u)))
        ortho = _squared_norm(ops.sub(identity, ops.matmul(ops.transpose(u), u)))
        return ops.add(fit, ops.scale(ortho, cfg.ortho_weight))

    u, history = _minimize(descent, orthonormal_init(n_prime, cfg.seed), cfg, "eigenvector")
    fit, ortho = eigenvector_residuals(frozen, z_cent, lambda_prime, u)
    result = InversionResult(
        solution=u,
        objective=fit + cfg.ortho_weight * ortho,
        history=history,
        residuals={"fit": fit, "orthogonality": ortho},
    )
    logger.info(
        "[INVERSION] ✓ Eigenvectors | steps: %d | objective: %.3e | fit: %.3e | orthogonality: %.3e",
        cfg.steps, result.objective, fit, ortho,
    )
    return result


def raw_adjacency(u_prime: np.ndarray, lambda_prime: np.ndarray) -> np.ndarray:
    """I - U′ diag(Λ′) U′ᵀ"""
    u_prime = np.asarray(u_prime, dtype=np.float64)
    lam = np.asarray(lambda_prime, dtype=np.float64).reshape(-1)
    if u_prime.shape[1] != lam.shape[0]:
        raise ShapeMismatch("U′ columns differ from Λ′ length", {"u": u_prime.shape, "eigenvalues": lam.shape[0]})
    return np.eye(u_prime.shape[0]) - (u_prime * lam[None, :]) @ u_prime.T


def reconstruct_adjacency(u_prime: np.ndarray, lambda_prime: np.ndarray, threshold: float) -> np.ndarray:
    """
    Weighted adjacency from the spectral reconstruction: symmetrized, zero
    diagonal, negatives clipped to 0, entries below `threshold` zeroed.
    """
    raw = raw_adjacency(u_prime, lambda_prime)
    adjacency = 0.5 * (raw + raw.T)
    np.fill_diagonal(adjacency, 0.0)
    adjacency[adjacency < 0.0] = 0.0
    adjacency[adjacency < threshold] = 0.0
    if not np.any(adjacency):
        logger.warning("[GENERATE] ⚠ Reconstructed adjacency is empty | threshold: %.4g", threshold)
    return adjacency


def invert_attributes(
    f: GcnParams,
    h_cent: np.ndarray,
    adjacency: np.ndarray,
    cfg: InversionConfig,
    feature_std: Optional[np.ndarray] = None,
) -> InversionResult:
    """
    Minimize ||H′ - f(Â′, X′)||_F over X′, with Â′ the GCN normalization of A′.
    Adam descends the squared residual; `objective` is the Frobenius norm.
    X′ starts as Gaussian noise scaled per column by `feature_std`.
    """
    h_cent = np.asarray(h_cent, dtype=np.float64)
    n_prime = h_cent.shape[0]
    if adjacency.shape != (n_prime, n_prime) or h_cent.shape[1] != f.emb_dim:
        raise ShapeMismatch("H′, A′ and the semantic model disagree", {"h_cent": h_cent.shape, "adjacency": adjacency.shape, "emb_dim": f.emb_dim})
    if feature_std is None:
        feature_std = np.ones(f.in_dim)
    feature_std = np.asarray(feature_std, dtype=np.float64).reshape(-1)
    if feature_std.shape[0] != f.in_dim:
        raise ShapeMismatch("feature_std length differs from the model input width", {"std": feature_std.shape[0], "in_dim": f.in_dim})

    frozen = f.clone()
    frozen.freeze()
    a_hat = gcn_normalize_dense(adjacency)
    target = Tensor(h_cent)
    rng = np.random.default_rng(cfg.seed)
    init = rng.standard_normal((n_prime, f.in_dim)) * feature_std[None, :]

    def descent(x: Tensor) -> Tensor:
        return _squared_norm(ops.sub(target, relay_forward(frozen, a_hat, x)))

    x, history = _minimize(descent, init, cfg, "attribute")
    fit = float(np.linalg.norm(h_cent - relay_forward(frozen, a_hat, x).values))
    result = InversionResult(solution=x, objective=fit, history=history, residuals={"fit": fit})
    logger.info("[INVERSION] ✓ Attributes | steps: %d | objective: %.3e", cfg.steps, result.objective)
    return result
