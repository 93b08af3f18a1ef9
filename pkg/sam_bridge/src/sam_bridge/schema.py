"""Parsing of the upstream prompt JSON (schema tag ``topoprompt/v1``).

This is the bridge's half of the wire contract: it consumes exactly what the
prompt generator exports, without importing it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError

PROMPT_SCHEMA = "topoprompt/v1"


@dataclass(frozen=True)
class Prompt:
    x: int
    y: int
    rank: int
    score: float | str  # "inf" for the essential maximum


@dataclass(frozen=True)
class PromptFile:
    width: int
    height: int
    source: str | None
    generator: str
    params: dict
    prompts: tuple[Prompt, ...]


def load_prompts(path: str | Path) -> PromptFile:
    """Read and validate a prompt JSON file; prompts come back in rank order."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid prompt JSON {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != PROMPT_SCHEMA:
        raise SchemaError(f"{path}: expected schema tag {PROMPT_SCHEMA!r}")
    try:
        width = doc["image"]["width"]
        height = doc["image"]["height"]
        source = doc["image"].get("source")
        generator = doc["generator"]
        params = doc["params"]
        raw = doc["points"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: missing field: {exc}") from exc
    if not (isinstance(width, int) and isinstance(height, int)
            and width > 0 and height > 0):
        raise SchemaError(f"{path}: bad image dimensions")

    prompts = []
    for i, rp in enumerate(raw):
        try:
            x, y, label, score, rank = (rp["x"], rp["y"], rp["label"],
                                        rp["score"], rp["rank"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"{path}: malformed point #{i}: {exc}") from exc
        if label != 1:
            raise SchemaError(f"{path}: point #{i} is not a foreground point")
        if not (0 <= x < width and 0 <= y < height):
            raise SchemaError(f"{path}: point #{i} out of bounds")
        if rank != i:
            raise SchemaError(f"{path}: ranks must be contiguous from 0")
        prompts.append(Prompt(x=x, y=y, rank=rank, score=score))
    return PromptFile(width=width, height=height, source=source,
                      generator=generator, params=params,
                      prompts=tuple(prompts))
