import numpy as np
import pytest

import ctgc.evaluation.tasks as tasks
from ctgc.errors import InsufficientLabels, InvalidValue
from ctgc.evaluation import TaskSummary, eval_clustering, eval_lp, eval_nc_fewshot, nmi
from ctgc.evaluation.tasks import auc, sample_fewshot
from ctgc.graph.models import LinkSplit
from ctgc.graph.splits import split_links

HELD_OUT = {"val_links", "val_negatives", "test_links", "test_negatives"}


class RecordingSplit(LinkSplit):
    def __getattribute__(self, name):
        if name in LinkSplit.model_fields:
            object.__getattribute__(self, "__dict__").setdefault("_reads", []).append(name)
        return super().__getattribute__(name)


def one_hot(labels, width):
    emb = np.zeros((labels.size, width))
    emb[np.arange(labels.size), labels] = 1.0
    return emb


def test_fewshot_split_takes_shots_per_class():
    labels = np.repeat(np.arange(3), 10)
    split = sample_fewshot(labels, 3, seed=0)
    assert np.all(np.bincount(labels[split.train_ids]) == 3)
    assert split.test_ids.size == 21
    assert np.intersect1d(split.train_ids, split.test_ids).size == 0


def test_fewshot_needs_enough_labelled_nodes():
    with pytest.raises(InsufficientLabels):
        sample_fewshot(np.array([0, 0, 0, 1, 1]), 3, seed=0)


def test_one_hot_embeddings_classify_perfectly():
    labels = np.repeat(np.arange(3), 10)
    assert eval_nc_fewshot(one_hot(labels, 5), labels, 3, head_epochs=200, seed=1, lr=0.1) == 1.0


def test_constant_embeddings_score_chance():
    labels = np.repeat(np.arange(2), 10)
    accuracy = eval_nc_fewshot(np.ones((20, 4)), labels, 3, head_epochs=50, seed=0)
    assert accuracy == pytest.approx(0.5)


def test_auc_extremes():
    assert auc(np.array([0.9, 0.8]), np.array([0.1, 0.2])) == 1.0
    assert auc(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.5


def test_nmi_properties():
    a = np.array([0, 0, 1, 1, 2, 2])
    assert nmi(a, a) == pytest.approx(1.0)
    assert nmi(a, (a + 1) % 3) == pytest.approx(1.0)
    assert nmi(a, np.zeros(6, dtype=int)) == pytest.approx(0.0)
    b = np.array([0, 1, 1, 0, 2, 2])
    assert nmi(a, b) == pytest.approx(nmi(b, a))


def test_nmi_of_independent_labelings_is_small():
    rng = np.random.default_rng(0)
    assert nmi(rng.integers(0, 5, 5000), rng.integers(0, 5, 5000)) < 0.05


def test_clustering_recovers_orthogonal_groups():
    labels = np.repeat(np.arange(3), 8)
    emb = one_hot(labels, 3) + 0.01 * np.random.default_rng(0).standard_normal((24, 3))
    assert eval_clustering(emb, labels, seed=0) == pytest.approx(1.0)


def test_link_head_trains_without_held_out_links(monkeypatch, fixture_sbm):
    split = split_links(fixture_sbm, seed=0)
    recording = RecordingSplit.model_construct(**{name: getattr(split, name) for name in LinkSplit.model_fields})
    original = tasks.train_lp_head

    def guarded(*args, **kwargs):
        reads = set(recording.__dict__.get("_reads", []))
        assert not reads & HELD_OUT
        return original(*args, **kwargs)

    monkeypatch.setattr(tasks, "train_lp_head", guarded)
    emb = np.random.default_rng(0).standard_normal((fixture_sbm.n, 8))
    score = eval_lp(emb, recording, head_epochs=20, seed=0)
    assert 0.0 <= score <= 1.0
    assert HELD_OUT <= set(recording.__dict__["_reads"])


def test_link_prediction_on_informative_embeddings(fixture_sbm):
    split = split_links(fixture_sbm, seed=1)
    emb = one_hot(fixture_sbm.labels, 3)
    assert eval_lp(emb, split, head_epochs=100, seed=0, lr=0.05) > 0.65


def test_task_summary_rejects_out_of_range_scores():
    with pytest.raises(InvalidValue):
        TaskSummary.from_scores([0.5, 1.5])
    summary = TaskSummary.from_scores([0.5, 0.7])
    assert summary.mean == pytest.approx(0.6)
    assert summary.std == pytest.approx(0.1)


def test_link_prediction_on_random_embeddings_is_chance(fixture_sbm):
    scores = []
    for seed in range(10):
        split = split_links(fixture_sbm, seed=seed)
        emb = np.random.default_rng(seed).standard_normal((fixture_sbm.n, 16))
        scores.append(eval_lp(emb, split, head_epochs=100, seed=seed))
    assert all(0.4 <= score <= 0.6 for score in scores)
