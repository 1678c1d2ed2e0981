# ---
# File: ctgc/__init__.py
# Purpose: Self-supervised graph condensation toolkit (relay-model training,
#          model-inversion synthesis and downstream evaluation)
# ---

__version__ = "0.1.0"
