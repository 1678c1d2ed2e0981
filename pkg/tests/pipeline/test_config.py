import json

import pytest

from ctgc.errors import InvalidConfig
from ctgc.evaluation import Task, Variant
from ctgc.graph.generators import generate_sbm
from ctgc.graph.io import save_graph
from ctgc.pipeline import PRESETS, build_run_config, get_preset, load_run_config
from ctgc.pipeline.models import merge_config


def test_presets_carry_bundled_hyperparameters():
    assert get_preset("cora")["n_prime"] == 70
    assert get_preset("CiteSeer")["k_iter"] == 3
    assert get_preset("reddit")["alpha"] == 10000.0
    assert get_preset(None) == {}
    assert set(PRESETS) >= {"cora", "citeseer", "arxiv", "reddit", "products", "sbm"}


def test_unknown_preset():
    with pytest.raises(InvalidConfig):
        get_preset("imagenet")


def test_sbm_preset_supplies_fixture():
    run = build_run_config({"preset": "sbm"})
    assert run.sbm.block_sizes == [100, 100, 100]
    assert run.condense.n_prime == 12
    assert str(run.out_dir).endswith("sbm")
    assert run.variant == Variant.FULL


def test_yaml_config_resolves_dataset_paths(tmp_path):
    save_graph(generate_sbm([10, 10], 0.5, 0.05, seed=0), tmp_path / "data")
    config = tmp_path / "run.yaml"
    config.write_text(
        "preset: cora\n"
        "dataset:\n"
        "  edges: data/edges.txt\n"
        "  features: data/features.ctgf\n"
        "  labels: data/labels.txt\n"
        "eval:\n"
        "  tasks: [nc]\n",
        encoding="utf-8",
    )
    run = load_run_config(config)
    assert run.dataset.edges.resolve() == (tmp_path / "data" / "edges.txt").resolve()
    assert run.eval.tasks == [Task.NC]
    assert run.condense.alpha == 1000.0


def test_overrides_win_over_file_and_preset(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"preset": "sbm", "condense": {"k_iter": 4}}), encoding="utf-8")
    run = load_run_config(config, {"condense": {"k_iter": 1, "tau": None}, "eval": {"seeds": [7]}})
    assert run.condense.k_iter == 1
    assert run.condense.tau == 0.3
    assert run.seeds == [7]


def test_missing_config_file(tmp_path):
    with pytest.raises(InvalidConfig):
        load_run_config(tmp_path / "nope.json")


def test_malformed_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text("{not json", encoding="utf-8")
    with pytest.raises(InvalidConfig):
        load_run_config(config)


@pytest.mark.parametrize(
    "payload",
    [
        {"preset": "sbm", "eval": {"seeds": []}},
        {"preset": "cora"},
        {"preset": "sbm", "condense": {"n_prime": 1}},
        {"preset": "sbm", "variant": "wo-everything"},
        {"preset": "sbm", "dataset": {"edges": "/missing/edges.txt", "features": "/missing/f.ctgf"}},
    ],
    ids=["empty-seeds", "no-graph", "tiny-n-prime", "bad-variant", "missing-files"],
)
def test_invalid_payloads(payload):
    with pytest.raises(InvalidConfig):
        build_run_config(payload)


def test_unknown_dataset_needs_explicit_hyperparameters():
    with pytest.raises(InvalidConfig):
        build_run_config({"sbm": {"block_sizes": [10], "p_in": 0.5, "p_out": 0.0}})


def test_merge_skips_none():
    merged = merge_config({"a": 1, "b": {"c": 2, "d": 3}}, {"a": None, "b": {"c": 5, "d": None}})
    assert merged == {"a": 1, "b": {"c": 5, "d": 3}}
