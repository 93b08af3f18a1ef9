import numpy as np
import pytest

from sam_bridge import rle
from sam_bridge.errors import SchemaError


class TestRoundTrip:
    def test_random_masks(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            h = int(rng.integers(1, 20))
            w = int(rng.integers(1, 20))
            mask = rng.random((h, w)) < rng.uniform(0.05, 0.95)
            enc = rle.encode(mask)
            assert sum(enc["counts"]) == h * w
            assert np.array_equal(rle.decode(enc), mask)

    def test_empty_and_full(self):
        empty = np.zeros((5, 7), bool)
        full = np.ones((5, 7), bool)
        assert rle.encode(empty)["counts"] == [35]
        assert rle.encode(full)["counts"] == [0, 35]
        assert np.array_equal(rle.decode(rle.encode(empty)), empty)
        assert np.array_equal(rle.decode(rle.encode(full)), full)

    def test_column_major_order(self):
        # single foreground pixel at (row 0, col 1): column-major offset = height
        mask = np.zeros((3, 2), bool)
        mask[0, 1] = True
        assert rle.encode(mask)["counts"] == [3, 1, 2]

    def test_counts_always_start_with_zero_run(self):
        mask = np.ones((2, 2), bool)
        counts = rle.encode(mask)["counts"]
        assert counts[0] == 0


class TestDecodeValidation:
    def test_size_mismatch_rejected(self):
        with pytest.raises(SchemaError):
            rle.decode({"format": "rle", "size": [2, 2], "counts": [3]})

    def test_negative_count_rejected(self):
        with pytest.raises(SchemaError):
            rle.decode({"format": "rle", "size": [1, 2], "counts": [-1, 3]})

    def test_unknown_format_rejected(self):
        with pytest.raises(SchemaError):
            rle.decode({"format": "coco-compressed", "size": [1, 1],
                        "counts": [1]})


class TestMaskIou:
    def test_disjoint(self):
        a = np.array([[1, 0]], bool)
        b = np.array([[0, 1]], bool)
        assert rle.mask_iou(a, b) == 0.0

    def test_identical(self):
        a = np.array([[1, 0], [1, 1]], bool)
        assert rle.mask_iou(a, a) == 1.0

    def test_half_overlap(self):
        a = np.array([[1, 1, 0]], bool)
        b = np.array([[0, 1, 1]], bool)
        assert rle.mask_iou(a, b) == pytest.approx(1 / 3)

    def test_both_empty(self):
        a = np.zeros((2, 2), bool)
        assert rle.mask_iou(a, a) == 1.0
