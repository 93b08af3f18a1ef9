import json
import time

import numpy as np
import pytest


class DiskSegmenter:
    """Deterministic stand-in for a model: a disk stamped at each prompt.

    ``delay`` adds a fixed per-call cost so timing behavior can be tested
    without a checkpoint.
    """

    def __init__(self, radius: int = 4, delay: float = 0.0):
        self.radius = radius
        self.delay = delay
        self.shape = None
        self.calls = 0

    def set_image(self, image_rgb):
        self.shape = image_rgb.shape[:2]

    def predict_point(self, x, y):
        if self.delay:
            time.sleep(self.delay)
        self.calls += 1
        h, w = self.shape
        ys, xs = np.ogrid[:h, :w]
        mask = (xs - x) ** 2 + (ys - y) ** 2 <= self.radius ** 2
        score = 0.5 + ((x * 31 + y * 17) % 100) / 200.0
        return mask, score

    def predict_points(self, points):
        self.batch_calls = getattr(self, "batch_calls", 0) + 1
        return [self.predict_point(x, y) for x, y in points]


@pytest.fixture
def segmenter():
    return DiskSegmenter(radius=4)


def make_prompt_doc(width, height, points, generator="random", params=None):
    return {
        "schema": "topoprompt/v1",
        "image": {"width": width, "height": height, "source": None},
        "generator": generator,
        "params": params or {},
        "points": [
            {"x": x, "y": y, "label": 1, "score": 0.0, "rank": i}
            for i, (x, y) in enumerate(points)
        ],
    }


@pytest.fixture
def prompt_file_factory(tmp_path):
    def write(points, width=64, height=48, name="p.json", **kwargs):
        path = tmp_path / name
        path.write_text(json.dumps(make_prompt_doc(width, height, points,
                                                   **kwargs)))
        return path

    return write


@pytest.fixture
def gray_image(tmp_path):
    """A 64x48 grayscale PNG with a few bright blobs."""
    from PIL import Image

    rng = np.random.default_rng(5)
    arr = np.full((48, 64), 30, dtype=np.uint8)
    for cx, cy in [(12, 12), (40, 20), (55, 38)]:
        ys, xs = np.ogrid[:48, :64]
        arr[(xs - cx) ** 2 + (ys - cy) ** 2 <= 36] = 200
    arr = (arr + rng.integers(0, 8, arr.shape)).clip(0, 255).astype(np.uint8)
    path = tmp_path / "cells.png"
    Image.fromarray(arr).save(path)
    return path
