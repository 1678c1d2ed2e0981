import numpy as np
import pytest

from ctgc.errors import InsufficientEdges
from ctgc.graph.generators import generate_sbm
from ctgc.graph.splits import pair_keys, split_links, split_sizes


def _keys(pairs, n):
    return set(pair_keys(pairs, n).tolist())


@pytest.fixture
def dense_sbm():
    return generate_sbm([60, 60], p_in=0.25, p_out=0.03, seed=2)


def test_split_sizes_for_thousand_edges():
    assert split_sizes(1000) == (100, 50, 150)


def test_complete_k20_is_too_small():
    graph = generate_sbm([20], p_in=1.0, p_out=0.0, seed=0)
    assert graph.edge_count == 190
    with pytest.raises(InsufficientEdges):
        split_links(graph, seed=0)


def test_sets_are_disjoint_and_sized(dense_sbm):
    split = split_links(dense_sbm, seed=4)
    n, m = dense_sbm.n, dense_sbm.edge_count
    _, n_val, n_test = split_sizes(m)
    assert len(split.train_links) == 100
    assert len(split.val_links) == n_val
    assert len(split.test_links) == n_test
    train, val, test = (_keys(split.train_links, n), _keys(split.val_links, n), _keys(split.test_links, n))
    assert not (train & val) and not (train & test) and not (val & test)
    for positives, negatives in [
        (split.train_links, split.train_negatives),
        (split.val_links, split.val_negatives),
        (split.test_links, split.test_negatives),
    ]:
        assert len(positives) == len(negatives)


def test_negatives_are_true_non_edges(dense_sbm):
    split = split_links(dense_sbm, seed=1)
    edges = _keys(dense_sbm.edges(), dense_sbm.n)
    negatives = np.concatenate([split.train_negatives, split.val_negatives, split.test_negatives])
    keys = _keys(negatives, dense_sbm.n)
    assert len(keys) == len(negatives)
    assert not (keys & edges)
    assert np.all(negatives[:, 0] != negatives[:, 1])


def test_message_graph_drops_held_out_edges(dense_sbm):
    split = split_links(dense_sbm, seed=9)
    message = _keys(split.message_graph.edges(), dense_sbm.n)
    held_out = _keys(split.val_links, dense_sbm.n) | _keys(split.test_links, dense_sbm.n)
    assert not (message & held_out)
    assert _keys(split.train_links, dense_sbm.n) <= message
    assert split.message_graph.edge_count == dense_sbm.edge_count - len(held_out)


def test_same_seed_same_split(dense_sbm):
    a = split_links(dense_sbm, seed=5)
    b = split_links(dense_sbm, seed=5)
    for field in ("train_links", "val_links", "test_links", "train_negatives", "val_negatives", "test_negatives"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
