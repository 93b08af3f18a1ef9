"""Overlay rendering: deduplicated masks and prompt points over the image."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from PIL import Image

from . import rle
from .bridge import BridgeResult

# distinct, readable on grayscale microscopy
_PALETTE = [
    (230, 60, 60), (60, 180, 75), (60, 110, 230), (240, 160, 30),
    (170, 70, 200), (70, 200, 200), (230, 220, 50), (240, 110, 170),
]


def render_overlay(image_rgb: NDArray[np.uint8], result: BridgeResult,
                   alpha: float = 0.45) -> NDArray[np.uint8]:
    """Blend each unique mask with its palette color and mark the prompts."""
    out = image_rgb.astype(np.float64).copy()
    color_idx = 0
    for row in result.results:
        if row.duplicate_of is not None:
            continue
        mask = rle.decode(row.mask)
        if not mask.any():
            continue
        color = np.array(_PALETTE[color_idx % len(_PALETTE)], dtype=np.float64)
        color_idx += 1
        out[mask] = (1.0 - alpha) * out[mask] + alpha * color
    out = out.round().clip(0, 255).astype(np.uint8)

    h, w = out.shape[:2]
    for row in result.results:
        for dx, dy in ((0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)):
            x, y = row.x + dx, row.y + dy
            if 0 <= x < w and 0 <= y < h:
                out[y, x] = (255, 255, 255)
    return out


def write_overlay(image_rgb: NDArray[np.uint8], result: BridgeResult,
                  path: str | Path) -> None:
    Image.fromarray(render_overlay(image_rgb, result)).save(Path(path))
