"""Bridge core: one segmenter forward pass per prompt point, results to JSON.

Result rows align 1:1 with the input prompts in rank order; deduplication
never removes a row, it only marks later near-identical masks (pairwise IoU
above the threshold) with the rank of the mask they duplicate, so several
prompts landing on one object count as a single segment.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from PIL import Image, UnidentifiedImageError

from . import rle
from .errors import DimensionMismatchError, SchemaError
from .schema import PromptFile
from .segmenter import Segmenter

RESULT_SCHEMA = "topoprompt/bridge-result-v1"
DEDUP_IOU = 0.9


@dataclass(frozen=True)
class PromptResult:
    rank: int
    x: int
    y: int
    predicted_quality: float
    elapsed_s: float
    mask: dict  # RLE object
    duplicate_of: int | None


@dataclass(frozen=True)
class BridgeResult:
    width: int
    height: int
    image_path: str
    prompts_path: str
    checkpoint: dict
    results: tuple[PromptResult, ...]
    mask_count: int  # after deduplication
    total_time_s: float

    def to_json_dict(self) -> dict:
        return {
            "schema": RESULT_SCHEMA,
            "image": {"width": self.width, "height": self.height,
                      "source": self.image_path},
            "prompts": self.prompts_path,
            "checkpoint": self.checkpoint,
            "results": [
                {"rank": r.rank, "x": r.x, "y": r.y,
                 "predicted_quality": r.predicted_quality,
                 "elapsed_s": r.elapsed_s, "mask": r.mask,
                 "duplicate_of": r.duplicate_of}
                for r in self.results
            ],
            "aggregate": {"prompt_count": len(self.results),
                          "mask_count": self.mask_count,
                          "total_time_s": self.total_time_s},
        }


def load_image_rgb(path: str | Path) -> NDArray[np.uint8]:
    """Decode any Pillow-readable image to (H, W, 3) uint8."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    try:
        with Image.open(path) as img:
            img.load()
            if img.mode in ("I", "I;16", "I;16B", "I;16L"):
                # 16-bit grayscale: rescale into 8 bits before RGB conversion
                arr = np.asarray(img, dtype=np.float64)
                arr = (arr / 257.0).clip(0, 255).astype(np.uint8)
                return np.stack([arr] * 3, axis=-1)
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise SchemaError(f"not a readable image: {path}") from exc


def _predict_all(segmenter: Segmenter, prompts, batch_size: int):
    """(prompt, mask, score, elapsed) per prompt, in rank order.

    One forward pass per point by default; ``batch_size > 1`` groups points
    into batched calls when the segmenter supports them, splitting the batch
    wall time evenly across its rows.
    """
    if batch_size > 1 and hasattr(segmenter, "predict_points"):
        out = []
        for start in range(0, len(prompts), batch_size):
            chunk = prompts[start : start + batch_size]
            t0 = time.perf_counter()
            preds = segmenter.predict_points([(p.x, p.y) for p in chunk])
            share = (time.perf_counter() - t0) / len(chunk)
            out.extend((p, mask, score, share)
                       for p, (mask, score) in zip(chunk, preds))
        return out
    out = []
    for p in prompts:
        t0 = time.perf_counter()
        mask, score = segmenter.predict_point(p.x, p.y)
        out.append((p, mask, score, time.perf_counter() - t0))
    return out


def run_bridge(image_rgb: NDArray[np.uint8], prompt_file: PromptFile,
               segmenter: Segmenter, *, image_path: str = "",
               prompts_path: str = "", checkpoint_meta: dict | None = None,
               dedup_iou: float = DEDUP_IOU, batch_size: int = 1) -> BridgeResult:
    """Segment once per prompt and assemble the result document."""
    h, w = image_rgb.shape[:2]
    if (w, h) != (prompt_file.width, prompt_file.height):
        raise DimensionMismatchError(
            f"image is {w}x{h} but prompt JSON says "
            f"{prompt_file.width}x{prompt_file.height}")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")

    t_start = time.perf_counter()
    segmenter.set_image(image_rgb)
    rows: list[PromptResult] = []
    kept_masks: list[tuple[int, NDArray[np.bool_]]] = []  # (rank, mask)
    for prompt, mask, score, elapsed in _predict_all(segmenter,
                                                     prompt_file.prompts,
                                                     batch_size):
        if mask.shape != (h, w):
            raise DimensionMismatchError(
                f"segmenter returned a {mask.shape} mask for a {h}x{w} image")
        duplicate_of = None
        for kept_rank, kept in kept_masks:
            if rle.mask_iou(mask, kept) > dedup_iou:
                duplicate_of = kept_rank
                break
        if duplicate_of is None:
            kept_masks.append((prompt.rank, mask))
        rows.append(PromptResult(
            rank=prompt.rank, x=prompt.x, y=prompt.y,
            predicted_quality=float(np.clip(score, 0.0, 1.0)),
            elapsed_s=elapsed, mask=rle.encode(mask),
            duplicate_of=duplicate_of))
    total = time.perf_counter() - t_start

    return BridgeResult(
        width=w, height=h, image_path=image_path, prompts_path=prompts_path,
        checkpoint=checkpoint_meta or {}, results=tuple(rows),
        mask_count=len(kept_masks), total_time_s=total)


def write_result(result: BridgeResult, path: str | Path) -> None:
    Path(path).write_text(json.dumps(result.to_json_dict(), indent=2) + "\n",
                          encoding="utf-8")


def load_result(path: str | Path) -> dict:
    """Read a result document back, verifying the schema tag and RLE sizes."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid result JSON {path}: {exc}") from exc
    if doc.get("schema") != RESULT_SCHEMA:
        raise SchemaError(f"{path}: expected schema tag {RESULT_SCHEMA!r}")
    for row in doc.get("results", []):
        rle.decode(row["mask"])  # raises SchemaError if sizes disagree
    return doc
