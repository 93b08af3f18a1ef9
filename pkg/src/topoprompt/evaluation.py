"""Scoring prompt sets against ground truth, and the Table-style benchmark.

Two notions of success are reported separately, because prompt coverage and
segmenter output need not agree: ``hit_rate`` counts objects containing at
least one prompt, while ``detection_accuracy`` runs a mock threshold
segmenter per prompt and counts objects recovered with sufficient IoU. On
clean synthetic scenes the mock segmenter is exact, so any gap between the
two metrics is attributable to prompt placement alone.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatchError
from .prompts import (
    DEFAULT_MIN_PERSISTENCE,
    PromptPoint,
    PromptSet,
    grid_prompts,
    random_prompts,
    tda_prompts,
)
from .scalar_field import ScalarImage
from .synth import SyntheticScene

__all__ = [
    "OracleMask",
    "BenchRow",
    "BenchReport",
    "GeneratorSpec",
    "oracle_segment",
    "hit_rate",
    "detection_accuracy",
    "quality",
    "match_masks",
    "benchmark",
    "default_generator_specs",
    "parse_generator_name",
    "default_threshold",
]

_OFFSETS_8 = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


@dataclass(frozen=True)
class OracleMask:
    """A connected superlevel component claimed by one prompt.

    ``indices`` are sorted linear pixel indices; two prompts inside the same
    component therefore produce byte-identical masks, which is what makes
    deduplication exact.
    """

    indices: NDArray[np.int64]
    prompt_rank: int
    iou_vs_gt: float | None = None

    def __post_init__(self) -> None:
        idx = np.array(self.indices, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return int(self.indices.size)


def oracle_segment(image: ScalarImage, point: PromptPoint,
                   threshold: float) -> OracleMask | None:
    """Mock segmenter: the 8-connected component of {v >= threshold} at the point.

    Returns None when the prompt sits below the threshold. Cost is
    proportional to the component size per call; nothing is shared between
    calls, mirroring a per-prompt segmenter invocation.
    """
    w, h = image.width, image.height
    if not (0 <= point.x < w and 0 <= point.y < h):
        raise ValueError(f"point ({point.x}, {point.y}) out of bounds")
    values = image.values
    seed = point.y * w + point.x
    if values[seed] < threshold:
        return None

    visited = np.zeros(values.size, dtype=bool)
    visited[seed] = True
    frontier = np.array([seed], dtype=np.int64)
    collected = [frontier]
    while frontier.size:
        xs = frontier % w
        ys = frontier // w
        nxt = []
        for dx, dy in _OFFSETS_8:
            sel = np.ones(frontier.size, dtype=bool)
            if dx == -1:
                sel &= xs > 0
            elif dx == 1:
                sel &= xs < w - 1
            if dy == -1:
                sel &= ys > 0
            elif dy == 1:
                sel &= ys < h - 1
            q = frontier[sel] + dy * w + dx
            q = q[~visited[q]]
            if q.size:
                q = q[values[q] >= threshold]
            if q.size:
                visited[q] = True
                nxt.append(q)
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, np.int64)
        if frontier.size:
            collected.append(frontier)
    indices = np.sort(np.concatenate(collected))
    return OracleMask(indices=indices, prompt_rank=point.rank)


def _check_dims(scene: SyntheticScene, prompts: PromptSet) -> None:
    if (scene.width, scene.height) != (prompts.width, prompts.height):
        raise DimensionMismatchError(
            f"scene is {scene.width}x{scene.height}, prompts are "
            f"{prompts.width}x{prompts.height}")


def hit_rate(scene: SyntheticScene, prompts: PromptSet) -> float:
    """Fraction of objects containing at least one prompt point."""
    _check_dims(scene, prompts)
    total = scene.object_count()
    if total == 0:
        return 1.0
    hit = {int(scene.label_map[p.y, p.x]) for p in prompts.points}
    hit.discard(0)
    return len(hit) / total


def dedup_masks(masks: Sequence[OracleMask]) -> list[OracleMask]:
    """Drop masks whose pixel sets already occurred (keeps first by rank order)."""
    seen: set[bytes] = set()
    unique = []
    for m in masks:
        key = m.indices.tobytes()
        if key not in seen:
            seen.add(key)
            unique.append(m)
    return unique


def segment_all(image: ScalarImage, prompts: PromptSet,
                threshold: float) -> list[OracleMask]:
    """One oracle segmentation per prompt, deduplicated."""
    masks = []
    for p in prompts.points:
        m = oracle_segment(image, p, threshold)
        if m is not None:
            masks.append(m)
    return dedup_masks(masks)


def match_masks(masks: Sequence[OracleMask],
                scene: SyntheticScene) -> list[tuple[OracleMask, int, float]]:
    """Greedy one-to-one matching of masks to objects by IoU, descending.

    Exact for disjoint masks (the oracle's case); approximate in general.
    Returns (mask, object_id, iou) triples.
    """
    label_flat = scene.label_map.reshape(-1)
    n_objects = scene.object_count()
    gt_sizes = np.bincount(label_flat, minlength=n_objects + 1)

    candidates = []
    for mi, mask in enumerate(masks):
        overlap = np.bincount(label_flat[mask.indices], minlength=n_objects + 1)
        for gt_id in np.nonzero(overlap[1:])[0] + 1:
            inter = int(overlap[gt_id])
            union = mask.size + int(gt_sizes[gt_id]) - inter
            candidates.append((inter / union, mi, int(gt_id)))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))

    used_masks: set[int] = set()
    used_gt: set[int] = set()
    matched = []
    for iou, mi, gt_id in candidates:
        if mi in used_masks or gt_id in used_gt:
            continue
        used_masks.add(mi)
        used_gt.add(gt_id)
        matched.append((masks[mi], gt_id, iou))
    return matched


def detection_accuracy(image: ScalarImage, scene: SyntheticScene,
                       prompts: PromptSet, threshold: float,
                       iou_min: float = 0.5) -> float:
    """Objects recovered by the mock segmenter with IoU >= iou_min, over total."""
    _check_dims(scene, prompts)
    total = scene.object_count()
    if total == 0:
        return 1.0
    masks = segment_all(image, prompts, threshold)
    matched = match_masks(masks, scene)
    return sum(1 for _, _, iou in matched if iou >= iou_min) / total


def quality(masks: Sequence[OracleMask], scene: SyntheticScene) -> float | None:
    """Mean IoU of matched masks against their objects; None when nothing matched."""
    matched = match_masks(masks, scene)
    if not matched:
        return None
    return sum(iou for _, _, iou in matched) / len(matched)


def default_threshold(scene: SyntheticScene) -> float:
    """Midpoint of background and minimum object intensity (synthetic default)."""
    return (scene.config.background + scene.config.intensity_range[0]) / 2.0


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """A named prompt generator configuration for one benchmark column."""

    name: str
    kind: str  # tda | grid | random
    params: dict[str, Any] = field(default_factory=dict)

    def build(self, image: ScalarImage, image_index: int) -> PromptSet:
        if self.kind == "grid":
            return grid_prompts(image.width, image.height, self.params["n"])
        if self.kind == "random":
            # a distinct stream per image, reproducibly derived from the base seed
            seed = int(self.params.get("seed", 0)) + image_index
            return random_prompts(image.width, image.height,
                                  self.params["count"], seed)
        if self.kind == "tda":
            return tda_prompts(image, **{k: v for k, v in self.params.items()
                                         if k != "seed"})
        raise ValueError(f"unknown generator kind {self.kind!r}")


def default_generator_specs(tda_budget: int | None = None) -> list[GeneratorSpec]:
    """The seven standard benchmark columns."""
    return [
        GeneratorSpec("grid16", "grid", {"n": 16}),
        GeneratorSpec("grid32", "grid", {"n": 32}),
        GeneratorSpec("grid64", "grid", {"n": 64}),
        GeneratorSpec("random256", "random", {"count": 256, "seed": 0}),
        GeneratorSpec("random1024", "random", {"count": 1024, "seed": 0}),
        GeneratorSpec("random4096", "random", {"count": 4096, "seed": 0}),
        GeneratorSpec("tda", "tda",
                      {"min_persistence": DEFAULT_MIN_PERSISTENCE,
                       "budget": tda_budget}),
    ]


def parse_generator_name(name: str) -> GeneratorSpec:
    """gridN, randomN, tda or tdaN (N = point budget)."""
    name = name.strip().lower()
    if name.startswith("grid") and name[4:].isdigit():
        return GeneratorSpec(name, "grid", {"n": int(name[4:])})
    if name.startswith("random") and name[6:].isdigit():
        return GeneratorSpec(name, "random", {"count": int(name[6:]), "seed": 0})
    if name == "tda":
        return GeneratorSpec(name, "tda",
                             {"min_persistence": DEFAULT_MIN_PERSISTENCE})
    if name.startswith("tda") and name[3:].isdigit():
        return GeneratorSpec(name, "tda",
                             {"min_persistence": DEFAULT_MIN_PERSISTENCE,
                              "budget": int(name[3:])})
    raise ValueError(f"unknown generator name {name!r}")


@dataclass(frozen=True)
class BenchRow:
    generator: str
    prompt_count: float
    time_s: float
    accuracy_pct: float
    quality: float | None


@dataclass(frozen=True)
class BenchReport:
    """Per-generator means over the dataset."""

    rows: dict[str, BenchRow]
    n_images: int
    threshold: float | None
    iou_min: float
    repeat: int

    def to_csv(self) -> str:
        lines = ["generator,prompt_count,time_s,accuracy_pct,quality"]
        for row in self.rows.values():
            q = "" if row.quality is None else f"{row.quality:.6f}"
            lines.append(f"{row.generator},{row.prompt_count:.1f},"
                         f"{row.time_s:.6f},{row.accuracy_pct:.4f},{q}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "n_images": self.n_images,
            "threshold": self.threshold,
            "iou_min": self.iou_min,
            "repeat": self.repeat,
            "rows": {
                name: {"prompt_count": r.prompt_count, "time_s": r.time_s,
                       "accuracy_pct": r.accuracy_pct, "quality": r.quality}
                for name, r in self.rows.items()
            },
        }

    def format_table(self) -> str:
        names = list(self.rows)
        widths = [max(len(n), 10) for n in names]
        header = "metric      " + "  ".join(n.rjust(w) for n, w in zip(names, widths))
        fmt = lambda v: "-" if v is None else f"{v:.4g}"
        time_row = "time_s      " + "  ".join(
            fmt(self.rows[n].time_s).rjust(w) for n, w in zip(names, widths))
        acc_row = "accuracy_%  " + "  ".join(
            fmt(self.rows[n].accuracy_pct).rjust(w) for n, w in zip(names, widths))
        qual_row = "quality     " + "  ".join(
            fmt(self.rows[n].quality).rjust(w) for n, w in zip(names, widths))
        count_row = "prompts     " + "  ".join(
            fmt(self.rows[n].prompt_count).rjust(w) for n, w in zip(names, widths))
        return "\n".join([header, time_row, acc_row, qual_row, count_row]) + "\n"


def _bench_one_image(spec: GeneratorSpec, image: ScalarImage,
                     scene: SyntheticScene, index: int, threshold: float | None,
                     iou_min: float, repeat: int):
    thr = default_threshold(scene) if threshold is None else threshold
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        pset = spec.build(image, index)
        masks = segment_all(image, pset, thr)
        matched = match_masks(masks, scene)
        times.append(time.perf_counter() - t0)
    total = scene.object_count()
    acc = (sum(1 for _, _, iou in matched if iou >= iou_min) / total
           if total else 1.0)
    qual = (sum(iou for _, _, iou in matched) / len(matched)
            if matched else None)
    return sum(times) / len(times), acc, qual, len(pset)


def benchmark(data: Sequence[tuple[ScalarImage, SyntheticScene]],
              generator_specs: Sequence[GeneratorSpec],
              threshold: float | None = None, iou_min: float = 0.5,
              repeat: int = 1, jobs: int = 1) -> BenchReport:
    """Run every generator over every image and average the per-image results.

    Wall time covers prompt generation plus segmentation and matching (not
    image synthesis or decode); with ``repeat > 1`` the timing is a mean over
    repeats while accuracy, deterministic by construction, is unchanged.
    ``jobs`` parallelizes across images; results are reduced in image order
    either way, so only timings can differ between runs.
    """
    if not data:
        raise ValueError("benchmark needs at least one image")
    if not generator_specs:
        raise ValueError("benchmark needs at least one generator")
    if repeat < 1:
        raise ValueError("repeat must be >= 1")

    rows: dict[str, BenchRow] = {}
    for spec in generator_specs:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(
                    lambda iv: _bench_one_image(spec, iv[1][0], iv[1][1], iv[0],
                                                threshold, iou_min, repeat),
                    enumerate(data)))
        else:
            results = [_bench_one_image(spec, img, scene, i, threshold,
                                        iou_min, repeat)
                       for i, (img, scene) in enumerate(data)]
        times, accs, quals, counts = zip(*results)
        present = [q for q in quals if q is not None]
        rows[spec.name] = BenchRow(
            generator=spec.name,
            prompt_count=sum(counts) / len(counts),
            time_s=sum(times) / len(times),
            accuracy_pct=100.0 * sum(accs) / len(accs),
            quality=sum(present) / len(present) if present else None,
        )
    return BenchReport(rows=rows, n_images=len(data), threshold=threshold,
                       iou_min=iou_min, repeat=repeat)
