import numpy as np
import pytest

from ctgc.errors import FormatError, IndexOutOfRange, InvalidValue, ShapeMismatch
from ctgc.graph.io import load_graph, save_graph
from ctgc.utils.binary import write_features


def _write(tmp_path, edges: str, features: np.ndarray, labels=None):
    edge_path = tmp_path / "edges.txt"
    edge_path.write_text(edges, encoding="utf-8")
    feature_path = tmp_path / "features.ctgf"
    write_features(feature_path, features)
    label_path = None
    if labels is not None:
        label_path = tmp_path / "labels.txt"
        label_path.write_text("".join(f"{y}\n" for y in labels), encoding="utf-8")
    return edge_path, feature_path, label_path


def test_minimal_graph(tmp_path):
    graph = load_graph(*_write(tmp_path, "0 1\n", np.zeros((2, 3))))
    assert graph.n == 2
    assert graph.edge_count == 1
    assert graph.adjacency[0, 1] == graph.adjacency[1, 0] == 1.0


def test_edgeless_graph(tmp_path):
    graph = load_graph(*_write(tmp_path, "", np.zeros((4, 2))))
    assert graph.n == 4
    assert graph.edge_count == 0


def test_duplicates_collapse_to_max_weight(tmp_path):
    graph = load_graph(*_write(tmp_path, "# comment\n0 1 0.5\n1 0 2.0\n0 1\n", np.zeros((3, 1))))
    assert graph.edge_count == 1
    assert graph.adjacency[0, 1] == 2.0
    assert graph.adjacency[1, 0] == 2.0


def test_zero_weight_lines_store_no_entries(tmp_path):
    graph = load_graph(*_write(tmp_path, "0 1 0\n1 2\n", np.zeros((3, 1))))
    assert graph.adjacency.nnz == 2
    assert graph.edge_count == 1
    assert graph.adjacency[0, 1] == 0.0


def test_node_beyond_features_is_rejected(tmp_path):
    with pytest.raises(IndexOutOfRange):
        load_graph(*_write(tmp_path, "0 5\n", np.zeros((3, 2))))


def test_label_count_mismatch(tmp_path):
    with pytest.raises(ShapeMismatch):
        load_graph(*_write(tmp_path, "0 1\n", np.zeros((3, 2)), labels=[0, 1]))


def test_non_finite_csv_feature(tmp_path):
    edge_path = tmp_path / "edges.txt"
    edge_path.write_text("0 1\n", encoding="utf-8")
    feature_path = tmp_path / "features.csv"
    feature_path.write_text("1.0,nan\n0.0,1.0\n", encoding="utf-8")
    with pytest.raises(InvalidValue):
        load_graph(edge_path, feature_path)


def test_csv_fallback(tmp_path):
    edge_path = tmp_path / "edges.txt"
    edge_path.write_text("0 1\n1 2\n", encoding="utf-8")
    feature_path = tmp_path / "features.csv"
    feature_path.write_text("1,0\n0,1\n1,1\n", encoding="utf-8")
    graph = load_graph(edge_path, feature_path)
    assert graph.features.dtype == np.float32
    assert graph.features.shape == (3, 2)


def test_malformed_edge_line(tmp_path):
    with pytest.raises(FormatError):
        load_graph(*_write(tmp_path, "0 1 2 3\n", np.zeros((3, 1))))


def test_missing_feature_file(tmp_path):
    edge_path = tmp_path / "edges.txt"
    edge_path.write_text("0 1\n", encoding="utf-8")
    with pytest.raises(FormatError):
        load_graph(edge_path, tmp_path / "absent.ctgf")


def test_save_then_load_keeps_graph(tmp_path, small_sbm):
    paths = save_graph(small_sbm, tmp_path)
    loaded = load_graph(paths["edges"], paths["features"], paths["labels"])
    assert loaded.n == small_sbm.n
    assert (loaded.adjacency != small_sbm.adjacency).nnz == 0
    np.testing.assert_array_equal(loaded.features, small_sbm.features)
    np.testing.assert_array_equal(loaded.labels, small_sbm.labels)


def test_cora_counts(cora_dir):
    graph = load_graph(cora_dir / "edges.txt", cora_dir / "features.ctgf", cora_dir / "labels.txt")
    assert graph.n == 2708
    assert graph.num_classes == 7
    # 5429 raw citation lines; duplicates in either direction collapse
    assert 5278 <= graph.edge_count <= 5429
