"""Uncompressed COCO-style run-length encoding for binary masks.

Masks are flattened in column-major (Fortran) order and stored as alternating
run lengths, always starting with the number of background pixels. ``size``
is [height, width], matching the convention of the usual mask tooling.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .errors import SchemaError


def encode(mask: NDArray) -> dict:
    """Encode a 2D boolean mask; inverse of :func:`decode`."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError("mask must be 2D")
    h, w = mask.shape
    flat = mask.reshape(-1, order="F").astype(np.int8)
    change = np.flatnonzero(np.diff(flat)) + 1
    boundaries = np.concatenate(([0], change, [flat.size]))
    counts = np.diff(boundaries).tolist()
    if flat.size and flat[0]:  # runs must start with a zero count
        counts = [0] + counts
    return {"format": "rle", "size": [h, w], "counts": counts}


def decode(rle: dict) -> NDArray[np.bool_]:
    """Decode to a 2D boolean array of shape (height, width)."""
    try:
        if rle["format"] != "rle":
            raise SchemaError(f"unknown mask format {rle['format']!r}")
        h, w = rle["size"]
        counts = rle["counts"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed RLE object: {exc}") from exc
    if any((not isinstance(c, int)) or c < 0 for c in counts):
        raise SchemaError("RLE counts must be non-negative integers")
    total = sum(counts)
    if total != h * w:
        raise SchemaError(f"RLE decodes to {total} pixels, expected {h * w}")
    flat = np.zeros(h * w, dtype=bool)
    pos = 0
    value = False
    for c in counts:
        if value:
            flat[pos : pos + c] = True
        pos += c
        value = not value
    return flat.reshape((h, w), order="F")


def mask_iou(a: NDArray, b: NDArray) -> float:
    """IoU of two boolean masks of the same shape; empty-vs-empty counts as 1."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    union = np.logical_or(a, b).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(a, b).sum() / union)
