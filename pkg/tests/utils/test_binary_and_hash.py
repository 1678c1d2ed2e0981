import numpy as np
import pytest

from ctgc.errors import FormatError, ShapeMismatch
from ctgc.utils.binary import (
    decode_features,
    encode_features,
    read_dense_adjacency,
    write_dense_adjacency,
)
from ctgc.utils.hash import combine_hashes, hash_directory, hash_file, hash_payload


def test_feature_header_layout():
    blob = encode_features(np.arange(6, dtype=np.float32).reshape(2, 3))
    assert blob[:4] == b"CTGF"
    assert int.from_bytes(blob[4:8], "little") == 2
    assert int.from_bytes(blob[8:12], "little") == 3
    assert len(blob) == 12 + 6 * 4


def test_features_decode_exactly():
    matrix = np.random.default_rng(0).standard_normal((5, 4)).astype(np.float32)
    np.testing.assert_array_equal(decode_features(encode_features(matrix)), matrix)


def test_wrong_magic_rejected():
    blob = bytearray(encode_features(np.zeros((1, 1))))
    blob[:4] = b"NOPE"
    with pytest.raises(FormatError):
        decode_features(bytes(blob))


def test_short_payload_rejected():
    blob = encode_features(np.zeros((3, 3)))
    with pytest.raises(FormatError):
        decode_features(blob[:-4])


def test_dense_adjacency_requires_square(tmp_path):
    with pytest.raises(ShapeMismatch):
        write_dense_adjacency(tmp_path / "a.ctgf-dense", np.zeros((2, 3)))


def test_dense_adjacency_is_float64_exact(tmp_path):
    adjacency = np.array([[0.0, 1.0 / 3.0], [1.0 / 3.0, 0.0]])
    path = tmp_path / "a.ctgf-dense"
    write_dense_adjacency(path, adjacency)
    np.testing.assert_array_equal(read_dense_adjacency(path), adjacency)


def test_payload_hash_ignores_key_order():
    assert hash_payload({"a": 1, "b": [1, 2]}) == hash_payload({"b": [1, 2], "a": 1})
    assert hash_payload({"a": 1}) != hash_payload({"a": 2})


def test_directory_hash_tracks_content(tmp_path):
    (tmp_path / "x.txt").write_text("one", encoding="utf-8")
    before = hash_directory(tmp_path)
    assert hash_file(tmp_path / "x.txt") != before
    (tmp_path / "x.txt").write_text("two", encoding="utf-8")
    assert hash_directory(tmp_path) != before
    assert combine_hashes(["a", "b"]) != combine_hashes(["b", "a"])
