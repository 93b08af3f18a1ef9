"""Synthetic microscopy-style benchmark scenes: bright ovals on a dark background.

Each scene is rendered with exact instance labels so prompt generators can be
scored against ground truth without a real segmenter. Ovals are placed by
rejection sampling; with the default zero-overlap policy they are also kept
non-adjacent, so every object is an isolated intensity plateau with its own
topological maximum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy.ndimage import binary_dilation

from .errors import PlacementFailureError, SchemaError
from .scalar_field import ScalarImage, write_image, _load_raw

__all__ = [
    "Oval",
    "SceneConfig",
    "SyntheticScene",
    "generate_scene",
    "dataset",
    "save_scene",
    "load_scene",
    "discover_dataset",
]

SCENE_SCHEMA = "topoprompt/scene-v1"

_MAX_TRIES_PER_OVAL = 1000


@dataclass(frozen=True, slots=True)
class Oval:
    """A rotated ellipse with a flat intensity."""

    cx: float
    cy: float
    a: float
    b: float
    rotation: float
    intensity: float


@dataclass(frozen=True)
class SceneConfig:
    """Generation parameters; defaults follow the benchmark setup."""

    seed: int = 42
    width: int = 1024
    height: int = 1024
    count: int = 80
    semi_axis_range: tuple[float, float] = (4.0, 12.0)
    intensity_range: tuple[float, float] = (0.6, 1.0)
    background: float = 0.1
    noise_sigma: float = 0.02
    max_overlap: int = 0

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0")
        lo, hi = self.semi_axis_range
        if not 0 < lo <= hi:
            raise ValueError("semi_axis_range must satisfy 0 < lo <= hi")
        ilo, ihi = self.intensity_range
        if not (self.background < ilo <= ihi <= 1.0):
            raise ValueError("intensity_range must lie in (background, 1]")
        if not 0.0 <= self.background < 1.0:
            raise ValueError("background must lie in [0, 1)")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.max_overlap < 0:
            raise ValueError("max_overlap must be >= 0")


@dataclass(frozen=True)
class SyntheticScene:
    """Ground truth for one rendered image.

    ``label_map`` is (height, width) int32: 0 is background, k marks the
    pixels of oval k (1-based; every id from 1..len(ovals) occurs).
    """

    ovals: tuple[Oval, ...]
    label_map: NDArray[np.int32]
    config: SceneConfig

    def __post_init__(self) -> None:
        lm = np.array(self.label_map, dtype=np.int32)
        lm.setflags(write=False)
        object.__setattr__(self, "label_map", lm)

    @property
    def width(self) -> int:
        return self.label_map.shape[1]

    @property
    def height(self) -> int:
        return self.label_map.shape[0]

    def object_count(self) -> int:
        return len(self.ovals)


def _rasterize(oval: Oval, width: int, height: int):
    """Interior pixel indices of an oval, or None if it clips the border."""
    ct, st = math.cos(oval.rotation), math.sin(oval.rotation)
    half_w = math.sqrt((oval.a * ct) ** 2 + (oval.b * st) ** 2)
    half_h = math.sqrt((oval.a * st) ** 2 + (oval.b * ct) ** 2)
    x0, x1 = math.floor(oval.cx - half_w), math.ceil(oval.cx + half_w)
    y0, y1 = math.floor(oval.cy - half_h), math.ceil(oval.cy + half_h)
    if x0 < 0 or y0 < 0 or x1 >= width or y1 >= height:
        return None
    xs = np.arange(x0, x1 + 1, dtype=np.float64)
    ys = np.arange(y0, y1 + 1, dtype=np.float64)
    dx = xs[None, :] - oval.cx
    dy = ys[:, None] - oval.cy
    u = (dx * ct + dy * st) / oval.a
    v = (-dx * st + dy * ct) / oval.b
    inside = (u * u + v * v) <= 1.0
    iy, ix = np.nonzero(inside)
    if iy.size == 0:
        return None
    return iy + y0, ix + x0


def generate_scene(config: SceneConfig) -> tuple[ScalarImage, SyntheticScene]:
    """Render one scene; deterministic in config.seed.

    Placement accepts an oval only if it lies fully in-bounds and overlaps at
    most ``max_overlap`` already-placed pixels. With ``max_overlap == 0``
    candidates must additionally not touch an existing oval (1-pixel halo,
    8-connected), which guarantees each object is a separate superlevel
    component. Pixel values are max(background, intensity) plus optional
    Gaussian noise, clamped to [0, 1].
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    w, h = config.width, config.height
    label = np.zeros((h, w), dtype=np.int32)
    blocked = np.zeros((h, w), dtype=bool)  # labelled pixels plus halo
    ovals: list[Oval] = []
    masks: list[tuple[np.ndarray, np.ndarray]] = []

    for k in range(1, config.count + 1):
        for _ in range(_MAX_TRIES_PER_OVAL):
            a = float(rng.uniform(*config.semi_axis_range))
            b = float(rng.uniform(*config.semi_axis_range))
            theta = float(rng.uniform(0.0, math.pi))
            cx = float(rng.uniform(0.0, w))
            cy = float(rng.uniform(0.0, h))
            intensity = float(rng.uniform(*config.intensity_range))
            oval = Oval(cx, cy, a, b, theta, intensity)
            raster = _rasterize(oval, w, h)
            if raster is None:
                continue
            iy, ix = raster
            if config.max_overlap == 0:
                if blocked[iy, ix].any():
                    continue
            else:
                if int((label[iy, ix] > 0).sum()) > config.max_overlap:
                    continue
            fresh = label[iy, ix] == 0
            if not fresh.any():
                continue  # fully occluded placements would lose the id
            label[iy[fresh], ix[fresh]] = k
            y0, y1 = iy.min(), iy.max()
            x0, x1 = ix.min(), ix.max()
            ylo, yhi = max(0, y0 - 1), min(h, y1 + 2)
            xlo, xhi = max(0, x0 - 1), min(w, x1 + 2)
            patch = np.zeros((yhi - ylo, xhi - xlo), dtype=bool)
            patch[iy - ylo, ix - xlo] = True
            blocked[ylo:yhi, xlo:xhi] |= binary_dilation(
                patch, structure=np.ones((3, 3), dtype=bool))
            ovals.append(oval)
            masks.append((iy, ix))
            break
        else:
            raise PlacementFailureError(
                f"could not place oval {k}/{config.count} after "
                f"{_MAX_TRIES_PER_OVAL} tries; configuration too dense")

    img = np.full((h, w), config.background, dtype=np.float64)
    for oval, (iy, ix) in zip(ovals, masks):
        img[iy, ix] = max(config.background, oval.intensity)
    if config.noise_sigma > 0:
        img += rng.normal(0.0, config.noise_sigma, size=img.shape)
        np.clip(img, 0.0, 1.0, out=img)

    scene = SyntheticScene(tuple(ovals), label, config)
    return ScalarImage.from_array(img), scene


def dataset(config: SceneConfig,
            n_images: int = 10) -> list[tuple[ScalarImage, SyntheticScene]]:
    """Independent scenes seeded seed, seed+1, ... seed+n_images-1."""
    if n_images < 0:
        raise ValueError("n_images must be >= 0")
    return [generate_scene(replace(config, seed=config.seed + i))
            for i in range(n_images)]


# ---------------------------------------------------------------------------
# On-disk format: image + sidecar scene JSON + 16-bit label PNG
# ---------------------------------------------------------------------------

def _config_to_dict(config: SceneConfig) -> dict[str, Any]:
    return {
        "seed": config.seed, "width": config.width, "height": config.height,
        "count": config.count,
        "semi_axis_range": list(config.semi_axis_range),
        "intensity_range": list(config.intensity_range),
        "background": config.background, "noise_sigma": config.noise_sigma,
        "max_overlap": config.max_overlap,
    }


def _config_from_dict(d: dict[str, Any]) -> SceneConfig:
    return SceneConfig(
        seed=d["seed"], width=d["width"], height=d["height"], count=d["count"],
        semi_axis_range=tuple(d["semi_axis_range"]),
        intensity_range=tuple(d["intensity_range"]),
        background=d["background"], noise_sigma=d["noise_sigma"],
        max_overlap=d.get("max_overlap", 0),
    )


def save_scene(image: ScalarImage, scene: SyntheticScene, directory: str | Path,
               stem: str, image_format: str = "pgm") -> dict[str, Path]:
    """Write <stem>.<fmt> (16-bit image), <stem>.scene.json, <stem>.labels.png."""
    if image_format not in ("pgm", "png"):
        raise ValueError(f"image_format must be 'pgm' or 'png', got {image_format!r}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    img_path = directory / f"{stem}.{image_format}"
    quantized = np.rint(image.as_array() * 65535.0).astype(np.uint16)
    write_image(img_path, quantized, maxval=65535)

    labels_path = directory / f"{stem}.labels.png"
    if scene.label_map.max(initial=0) > 65535:
        raise ValueError("label ids exceed 16-bit range")
    write_image(labels_path, scene.label_map.astype(np.uint16), maxval=65535)

    scene_path = directory / f"{stem}.scene.json"
    doc = {
        "schema": SCENE_SCHEMA,
        "image": {"width": scene.width, "height": scene.height,
                  "file": img_path.name, "labels": labels_path.name},
        "params": _config_to_dict(scene.config),
        "ovals": [
            {"cx": o.cx, "cy": o.cy, "a": o.a, "b": o.b,
             "rotation": o.rotation, "intensity": o.intensity}
            for o in scene.ovals
        ],
    }
    scene_path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return {"image": img_path, "labels": labels_path, "scene": scene_path}


def load_scene(scene_json: str | Path) -> tuple[ScalarImage, SyntheticScene]:
    """Load a scene written by save_scene; image values rescaled to [0, 1]."""
    scene_json = Path(scene_json)
    try:
        doc = json.loads(scene_json.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid scene JSON {scene_json}: {exc}") from exc
    if doc.get("schema") != SCENE_SCHEMA:
        raise SchemaError(f"expected schema tag {SCENE_SCHEMA!r} in {scene_json}")
    try:
        img_name = doc["image"]["file"]
        labels_name = doc["image"]["labels"]
        config = _config_from_dict(doc["params"])
        ovals = tuple(Oval(o["cx"], o["cy"], o["a"], o["b"],
                           o["rotation"], o["intensity"])
                      for o in doc["ovals"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed scene JSON {scene_json}: {exc}") from exc

    arr, max_rep = _load_raw(scene_json.parent / img_name)
    image = ScalarImage.from_array(arr / max_rep)
    labels_arr, _ = _load_raw(scene_json.parent / labels_name)
    scene = SyntheticScene(ovals, labels_arr.astype(np.int32), config)
    return image, scene


def discover_dataset(directory: str | Path) -> list[tuple[ScalarImage, SyntheticScene]]:
    """Load every *.scene.json under a directory, sorted by name."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.scene.json"))
    if not paths:
        raise FileNotFoundError(f"no *.scene.json files in {directory}")
    return [load_scene(p) for p in paths]
