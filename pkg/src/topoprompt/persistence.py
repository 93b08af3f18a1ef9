"""0-dimensional persistence of the superlevel-set filtration of a scalar image.

Sweeping a threshold downward from the global maximum, every local maximum
gives birth to a connected component of the superlevel set, and components die
when they merge at saddles. The persistence of a maximum, birth value minus
death value, measures its topological significance independently of its
absolute height: a tall peak sitting on the shoulder of a taller one can be
less persistent than a lower, isolated peak.

Plateaus are resolved by a total insertion order (value descending, linear
index ascending); the elder rule keeps the component whose birth pixel comes
first in that order. The component that never dies, rooted at the global
maximum, is reported with infinite persistence.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import KERNEL_BACKEND, sweep
from .errors import EmptyImageError
from .scalar_field import ScalarImage

__all__ = [
    "PersistencePair",
    "PersistenceDiagram",
    "compute_diagram",
    "filter_by_persistence",
    "top_k",
    "diagram_to_csv",
    "KERNEL_BACKEND",
]


@dataclass(frozen=True, slots=True)
class PersistencePair:
    """One local maximum paired with the saddle where its component merged.

    ``saddle_index`` / ``saddle_value`` are ``None`` for the essential class
    (the global maximum), whose persistence is ``math.inf``.
    """

    extremum_index: int
    extremum_value: float
    saddle_index: int | None
    saddle_value: float | None
    persistence: float

    @property
    def is_essential(self) -> bool:
        return self.saddle_index is None


@dataclass(frozen=True, slots=True)
class PersistenceDiagram:
    """Pairs sorted by (persistence descending, extremum index ascending)."""

    pairs: tuple[PersistencePair, ...]
    connectivity: int
    width: int
    height: int

    def __len__(self) -> int:
        return len(self.pairs)

    def extremum_coords(self) -> list[tuple[int, int]]:
        """(x, y) of every extremum, in diagram order."""
        return [(p.extremum_index % self.width, p.extremum_index // self.width)
                for p in self.pairs]


def compute_diagram(image: ScalarImage, connectivity: int = 8) -> PersistenceDiagram:
    """Pair every local maximum with its merge saddle via a descending sweep.

    Pixels are inserted from high to low value (ties broken by ascending
    linear index, which also resolves plateaus deterministically). Each
    insertion unions the pixel with its already-inserted neighbours; when an
    insertion merges two components the younger one dies there, and the
    inserted pixel is recorded as the saddle. Components that never merge
    become essential pairs with infinite persistence.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    if image.width < 1 or image.height < 1:
        raise EmptyImageError("cannot compute a diagram of an empty image")

    values = image.values
    n = values.size
    # Stable sort of -values = value descending with ties by ascending index.
    order = np.argsort(-values, kind="stable").astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n, dtype=np.int64)

    fin_ext, fin_sad, essential = sweep(order, pos, image.width, image.height,
                                        connectivity)

    pairs = [
        PersistencePair(
            extremum_index=int(e),
            extremum_value=float(values[e]),
            saddle_index=int(s),
            saddle_value=float(values[s]),
            persistence=float(values[e] - values[s]),
        )
        for e, s in zip(fin_ext.tolist(), fin_sad.tolist())
    ]
    pairs.extend(
        PersistencePair(
            extremum_index=int(e),
            extremum_value=float(values[e]),
            saddle_index=None,
            saddle_value=None,
            persistence=math.inf,
        )
        for e in essential.tolist()
    )
    pairs.sort(key=lambda p: (-p.persistence, p.extremum_index))
    return PersistenceDiagram(tuple(pairs), connectivity, image.width, image.height)


def filter_by_persistence(diagram: PersistenceDiagram,
                          min_persistence: float) -> PersistenceDiagram:
    """Keep pairs with persistence >= threshold; essential pairs always survive."""
    if min_persistence < 0:
        raise ValueError(f"min_persistence must be >= 0, got {min_persistence}")
    kept = tuple(p for p in diagram.pairs if p.persistence >= min_persistence)
    return PersistenceDiagram(kept, diagram.connectivity, diagram.width,
                              diagram.height)


def top_k(diagram: PersistenceDiagram, k: int) -> PersistenceDiagram:
    """First min(k, len) pairs in diagram order: the k most significant maxima."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return PersistenceDiagram(diagram.pairs[:k], diagram.connectivity,
                              diagram.width, diagram.height)


def diagram_to_csv(diagram: PersistenceDiagram) -> str:
    """Serialize as CSV, coordinates as (column, row) from the top-left.

    Infinite persistence is written as the literal ``inf``; the essential
    pair's saddle columns are left empty.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["extremum_x", "extremum_y", "extremum_value",
                     "saddle_x", "saddle_y", "saddle_value", "persistence"])
    w = diagram.width
    for p in diagram.pairs:
        ex, ey = p.extremum_index % w, p.extremum_index // w
        if p.is_essential:
            writer.writerow([ex, ey, repr(p.extremum_value), "", "", "", "inf"])
        else:
            sx, sy = p.saddle_index % w, p.saddle_index // w
            writer.writerow([ex, ey, repr(p.extremum_value), sx, sy,
                             repr(p.saddle_value), repr(p.persistence)])
    return buf.getvalue()
