# ---
# File: tests/conftest.py
# Purpose: Shared fixtures: small synthetic graphs and quick condensation
#          settings.
# ---

import os
from pathlib import Path

import numpy as np
import pytest
from scipy import sparse

from ctgc.condensation.models import CondenseConfig
from ctgc.graph.generators import generate_sbm
from ctgc.graph.models import SparseGraph


def cycle_graph(n: int, d: int = 2) -> SparseGraph:
    rows = np.arange(n)
    cols = (rows + 1) % n
    adjacency = sparse.csr_matrix((np.ones(n), (rows, cols)), shape=(n, n))
    adjacency = adjacency + adjacency.T
    return SparseGraph(n=n, adjacency=adjacency, features=np.ones((n, d)))


@pytest.fixture
def c4() -> SparseGraph:
    return cycle_graph(4)


@pytest.fixture
def small_sbm() -> SparseGraph:
    return generate_sbm([20, 20, 20], p_in=0.3, p_out=0.02, seed=0)


@pytest.fixture
def fixture_sbm() -> SparseGraph:
    return generate_sbm([100, 100, 100], p_in=0.1, p_out=0.01, seed=0)


@pytest.fixture
def quick_cfg() -> CondenseConfig:
    return CondenseConfig(
        n_prime=6, tau=0.3, alpha=1.0, m_pre=10, m_train=5, k_iter=2,
        lr_pre=0.01, lr_sem=0.001, lr_str=0.01, seed=0,
        hidden_dim=16, emb_dim=16, period=4,
    )


@pytest.fixture
def cora_dir() -> Path:
    root = os.environ.get("CTGC_CORA_DIR")
    if not root:
        pytest.skip("CTGC_CORA_DIR not set")
    return Path(root)
