# ---
# File: ctgc/pipeline/presets.py
# Purpose: Bundled per-dataset hyperparameters and condensed sizes, plus the
#          synthetic SBM fixture used for desk-scale runs.
# ---

from typing import Any, Optional

from ctgc.errors import InvalidConfig

# name -> CondenseConfig fields (pretraining epochs/lr, relay training
# epochs, alternation count, branch learning rates, α, τ, N′)
PRESETS: dict[str, dict[str, Any]] = {
    "cora": {
        "n_prime": 70, "m_pre": 200, "lr_pre": 0.001, "m_train": 20, "k_iter": 5,
        "lr_sem": 0.0001, "lr_str": 0.001, "alpha": 1000.0, "tau": 0.3,
    },
    "citeseer": {
        "n_prime": 60, "m_pre": 200, "lr_pre": 0.001, "m_train": 20, "k_iter": 3,
        "lr_sem": 0.0001, "lr_str": 0.001, "alpha": 1000.0, "tau": 0.3,
    },
    "arxiv": {
        "n_prime": 454, "m_pre": 200, "lr_pre": 0.001, "m_train": 50, "k_iter": 3,
        "lr_sem": 0.0001, "lr_str": 0.1, "alpha": 1000.0, "tau": 0.3,
    },
    "reddit": {
        "n_prime": 153, "m_pre": 20, "lr_pre": 0.0001, "m_train": 40, "k_iter": 3,
        "lr_sem": 0.001, "lr_str": 0.1, "alpha": 10000.0, "tau": 0.3,
    },
    "products": {
        "n_prime": 612, "m_pre": 200, "lr_pre": 0.001, "m_train": 10, "k_iter": 2,
        "lr_sem": 0.0001, "lr_str": 0.001, "alpha": 1000.0, "tau": 0.3,
    },
    # 300-node fixture; rates raised so the short schedule still moves
    "sbm": {
        "n_prime": 12, "m_pre": 100, "lr_pre": 0.01, "m_train": 20, "k_iter": 5,
        "lr_sem": 0.001, "lr_str": 0.01, "alpha": 10.0, "tau": 0.3,
    },
}

SBM_FIXTURE: dict[str, Any] = {
    "block_sizes": [100, 100, 100],
    "p_in": 0.1,
    "p_out": 0.01,
    "seed": 0,
    "noise_std": 0.5,
}

SWEEP_ALPHAS = [0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0]


def preset_names() -> list[str]:
    return sorted(PRESETS)


def get_preset(name: Optional[str]) -> dict[str, Any]:
    """Copy of a preset's condensation fields; an empty dict when no preset is named."""
    if name is None:
        return {}
    key = name.lower()
    if key not in PRESETS:
        raise InvalidConfig("Unknown dataset preset", {"preset": name, "known": preset_names()})
    return dict(PRESETS[key])
