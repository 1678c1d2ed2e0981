# ---
# File: ctgc/relay/gcn.py
# Purpose: Semantic relay forward passes over a GCN-normalized operator
# ---

import numpy as np
from scipy import sparse

from ctgc.autodiff import Tensor
from ctgc.autodiff import ops
from ctgc.errors import InvalidConfig, ShapeMismatch
from ctgc.graph.models import NormalizedOperator, OperatorKind
from ctgc.relay.models import Architecture, GcnParams


def _operator_matrix(a_hat):
    if isinstance(a_hat, NormalizedOperator):
        if a_hat.kind != OperatorKind.GCN_ADJACENCY:
            raise InvalidConfig("Relay GCN needs the gcn-adjacency operator", {"kind": a_hat.kind.value})
        return a_hat.matrix
    if sparse.issparse(a_hat):
        return a_hat.tocsr()
    return np.asarray(a_hat, dtype=np.float64)


def _check_inputs(p: GcnParams, matrix, x: Tensor) -> None:
    if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] != x.shape[0]:
        raise ShapeMismatch("Operator and feature rows disagree", {"operator": matrix.shape, "features": x.shape})
    if x.shape[1] != p.in_dim:
        raise ShapeMismatch("Feature width differs from the first layer", {"features": x.shape, "in_dim": p.in_dim})


def gcn_forward(p: GcnParams, a_hat, x) -> Tensor:
    """H = Â · ReLU(Â X W1) · W2"""
    matrix = _operator_matrix(a_hat)
    x = x if isinstance(x, Tensor) else Tensor(x)
    _check_inputs(p, matrix, x)
    w1, w2 = p.weights
    hidden = ops.relu(ops.spmm(matrix, ops.matmul(x, w1)))
    return ops.spmm(matrix, ops.matmul(hidden, w2))


def sgc_forward(p: GcnParams, a_hat, x) -> Tensor:
    """H = Â · Â · X · W"""
    matrix = _operator_matrix(a_hat)
    x = x if isinstance(x, Tensor) else Tensor(x)
    _check_inputs(p, matrix, x)
    return ops.spmm(matrix, ops.spmm(matrix, ops.matmul(x, p.weights[0])))


def relay_forward(p: GcnParams, a_hat, x) -> Tensor:
    if p.arch == Architecture.SGC:
        return sgc_forward(p, a_hat, x)
    return gcn_forward(p, a_hat, x)
