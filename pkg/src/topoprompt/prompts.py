"""Point-prompt generation: persistence-ranked points plus grid/random baselines.

The topology-guided generator turns each sufficiently persistent local maximum
into one foreground point, ordered by significance, so a budget of k points
always spends itself on the k most prominent structures. The grid and random
generators reproduce the conventional automatic-prompting baselines for
comparison.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from . import scalar_field
from .errors import BudgetExceedsPixelsError, SchemaError
from .persistence import compute_diagram, filter_by_persistence, top_k
from .scalar_field import ScalarImage

__all__ = [
    "PromptPoint",
    "PromptSet",
    "DEFAULT_MIN_PERSISTENCE",
    "tda_prompts",
    "grid_prompts",
    "random_prompts",
    "export_prompts",
    "import_prompts",
    "prompt_set_to_json",
    "prompt_set_from_json",
]

PROMPT_SCHEMA = "topoprompt/v1"
GENERATORS = ("tda", "grid", "random")

# Fraction of the normalized intensity range below which maxima are treated
# as noise. Exposed on every entry point; 5% keeps low-contrast objects while
# dropping sensor-level fluctuations.
DEFAULT_MIN_PERSISTENCE = 0.05


@dataclass(frozen=True, slots=True)
class PromptPoint:
    """A single foreground point prompt, (x, y) from the top-left corner."""

    x: int
    y: int
    label: int = 1
    score: float = 0.0
    rank: int = 0


@dataclass(frozen=True)
class PromptSet:
    """An ordered, de-duplicated set of point prompts for one image."""

    points: tuple[PromptPoint, ...]
    generator: str
    params: dict[str, Any] = field(default_factory=dict)
    width: int = 0
    height: int = 0
    source: str | None = None

    def __post_init__(self) -> None:
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("prompt set needs positive image dimensions")
        coords = set()
        for i, p in enumerate(self.points):
            if not (0 <= p.x < self.width and 0 <= p.y < self.height):
                raise ValueError(f"point ({p.x}, {p.y}) out of bounds "
                                 f"for {self.width}x{self.height}")
            if p.rank != i:
                raise ValueError("ranks must be the contiguous sequence 0..n-1")
            if (p.x, p.y) in coords:
                raise ValueError(f"duplicate point ({p.x}, {p.y})")
            coords.add((p.x, p.y))
        if self.generator == "tda":
            # significance order: score descending, source pixel ascending
            keys = [(-p.score, p.y * self.width + p.x) for p in self.points]
            if keys != sorted(keys):
                raise ValueError("tda points must be sorted by descending score")

    def __len__(self) -> int:
        return len(self.points)

    def coords(self) -> list[tuple[int, int]]:
        return [(p.x, p.y) for p in self.points]

    def with_source(self, source: str | None) -> "PromptSet":
        return replace(self, source=source)


def tda_prompts(image: ScalarImage, *, budget: int | None = None,
                min_persistence: float | None = None, sigma: float = 0.0,
                invert: bool = False, connectivity: int = 8) -> PromptSet:
    """One point per topologically significant maximum, most persistent first.

    Pipeline: optional invert -> normalize -> optional Gaussian smoothing ->
    persistence diagram -> threshold filter -> budget cut. At least one of
    ``budget`` and ``min_persistence`` must be given; when only a budget is
    given the threshold falls back to ``DEFAULT_MIN_PERSISTENCE`` (both
    limits apply, threshold first). The global maximum carries infinite
    score and always ranks first. An empty result is valid, not an error.
    """
    if budget is None and min_persistence is None:
        raise ValueError("need a budget, a min_persistence, or both")
    if budget is not None and budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")

    threshold = DEFAULT_MIN_PERSISTENCE if min_persistence is None else min_persistence

    f = scalar_field.invert(image) if invert else image
    f = scalar_field.normalize(f)
    if sigma > 0:
        f = scalar_field.gaussian_smooth(f, sigma)

    diagram = compute_diagram(f, connectivity)
    diagram = filter_by_persistence(diagram, threshold)
    if budget is not None:
        diagram = top_k(diagram, budget)

    points = tuple(
        PromptPoint(x=pair.extremum_index % image.width,
                    y=pair.extremum_index // image.width,
                    label=1, score=pair.persistence, rank=i)
        for i, pair in enumerate(diagram.pairs)
    )
    params = {
        "budget": budget,
        "min_persistence": threshold,
        "sigma": sigma,
        "invert": invert,
        "connectivity": connectivity,
    }
    return PromptSet(points, "tda", params, image.width, image.height)


def grid_prompts(width: int, height: int, n: int) -> PromptSet:
    """n x n cell-centered grid: x_i = floor((i + 0.5) * width / n), row-major.

    Cell centers match the usual automatic-mask-generation layout and keep
    points away from the border. ``n`` must not exceed the image side, or
    cell centers would collide.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if width < 1 or height < 1:
        raise ValueError("grid needs positive image dimensions")
    points = []
    rank = 0
    for j in range(n):
        y = (2 * j + 1) * height // (2 * n)
        for i in range(n):
            x = (2 * i + 1) * width // (2 * n)
            points.append(PromptPoint(x=x, y=y, label=1, score=0.0, rank=rank))
            rank += 1
    return PromptSet(tuple(points), "grid", {"n": n}, width, height)


def random_prompts(width: int, height: int, count: int, seed: int) -> PromptSet:
    """Unique uniform points from a PCG64 stream; identical across platforms.

    Duplicate draws are rejected and redrawn, so the result is a set of
    exactly ``count`` distinct pixels in draw order.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if count > width * height:
        raise BudgetExceedsPixelsError(
            f"cannot place {count} unique points on {width * height} pixels")
    rng = np.random.Generator(np.random.PCG64(seed))
    seen: set[tuple[int, int]] = set()
    points = []
    while len(points) < count:
        x = int(rng.integers(0, width))
        y = int(rng.integers(0, height))
        if (x, y) in seen:
            continue
        seen.add((x, y))
        points.append(PromptPoint(x=x, y=y, label=1, score=0.0, rank=len(points)))
    return PromptSet(tuple(points), "random", {"count": count, "seed": seed},
                     width, height)


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def prompt_set_to_json(pset: PromptSet) -> str:
    doc = {
        "schema": PROMPT_SCHEMA,
        "image": {"width": pset.width, "height": pset.height,
                  "source": pset.source},
        "generator": pset.generator,
        "params": pset.params,
        "points": [
            {"x": p.x, "y": p.y, "label": p.label,
             "score": "inf" if math.isinf(p.score) else p.score,
             "rank": p.rank}
            for p in pset.points
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def prompt_set_from_json(text: str) -> PromptSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != PROMPT_SCHEMA:
        raise SchemaError(f"expected schema tag {PROMPT_SCHEMA!r}")
    try:
        img = doc["image"]
        width, height = img["width"], img["height"]
        source = img.get("source")
        generator = doc["generator"]
        params = doc["params"]
        raw_points = doc["points"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"missing field: {exc}") from exc
    if not isinstance(width, int) or not isinstance(height, int):
        raise SchemaError("image dimensions must be integers")
    if not isinstance(raw_points, list) or not isinstance(params, dict):
        raise SchemaError("'points' must be a list and 'params' an object")

    points = []
    for i, rp in enumerate(raw_points):
        try:
            x, y, label, score, rank = (rp["x"], rp["y"], rp["label"],
                                        rp["score"], rp["rank"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed point #{i}: {exc}") from exc
        if score == "inf":
            score = math.inf
        if not isinstance(x, int) or not isinstance(y, int) \
                or not isinstance(rank, int) or label != 1 \
                or not isinstance(score, (int, float)):
            raise SchemaError(f"malformed point #{i}")
        points.append(PromptPoint(x=x, y=y, label=1, score=float(score), rank=rank))
    try:
        return PromptSet(tuple(points), generator, params, width, height, source)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def export_prompts(pset: PromptSet, path: str | Path) -> None:
    """Write the versioned prompt JSON; lossless against import_prompts."""
    Path(path).write_text(prompt_set_to_json(pset), encoding="utf-8")


def import_prompts(path: str | Path) -> PromptSet:
    """Read and validate a prompt JSON file."""
    return prompt_set_from_json(Path(path).read_text(encoding="utf-8"))
