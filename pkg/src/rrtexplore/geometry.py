"""Axis-aligned rectangle algebra for sliding windows."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

Point = Tuple[float, float]


class ZeroAreaRegion(ValueError):
    """Sampling was requested from a region whose total area is zero."""


@dataclass(frozen=True)
class Rect:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min <= self.x_max and self.y_min <= self.y_max):
            raise ValueError(f"inverted rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def corners(self) -> Tuple[Point, Point, Point, Point]:
        return (
            (self.x_min, self.y_min),
            (self.x_max, self.y_min),
            (self.x_max, self.y_max),
            (self.x_min, self.y_max),
        )

    def contains(self, p: Sequence[float]) -> bool:
        return self.x_min <= p[0] <= self.x_max and self.y_min <= p[1] <= self.y_max

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return (
            (pts[:, 0] >= self.x_min)
            & (pts[:, 0] <= self.x_max)
            & (pts[:, 1] >= self.y_min)
            & (pts[:, 1] <= self.y_max)
        )

    def contains_rect(self, other: "Rect") -> bool:
        return (
            self.x_min <= other.x_min
            and self.y_min <= other.y_min
            and other.x_max <= self.x_max
            and other.y_max <= self.y_max
        )


def intersect(a: Rect, b: Rect) -> Optional[Rect]:
    """Intersection of two rectangles, or ``None`` when their interiors are disjoint."""
    x0, x1 = max(a.x_min, b.x_min), min(a.x_max, b.x_max)
    y0, y1 = max(a.y_min, b.y_min), min(a.y_max, b.y_max)
    if x0 >= x1 or y0 >= y1:
        return None
    return Rect(x0, y0, x1, y1)


@dataclass(frozen=True)
class RegionDecomposition:
    """Split of the current window into the overlap with the previous one and the rest.

    ``non_overlap_parts`` are disjoint rectangles produced by a fixed guillotine
    order: left slab, right slab, bottom slab, top slab.
    """

    current: Rect
    overlap: Optional[Rect]
    non_overlap_parts: Tuple[Rect, ...] = field(default_factory=tuple)

    @property
    def s_o(self) -> float:
        return self.overlap.area if self.overlap is not None else 0.0

    @property
    def s_n(self) -> float:
        return sum(p.area for p in self.non_overlap_parts)

    @property
    def overlap_parts(self) -> Tuple[Rect, ...]:
        return (self.overlap,) if self.overlap is not None else ()

    def in_overlap(self, pts: np.ndarray) -> np.ndarray:
        if self.overlap is None:
            return np.zeros(len(np.asarray(pts).reshape(-1, 2)), dtype=bool)
        return self.overlap.contains_many(pts)


def decompose(current: Rect, previous: Optional[Rect]) -> RegionDecomposition:
    if previous is None:
        parts = (current,) if current.area > 0 else ()
        return RegionDecomposition(current, None, parts)
    ov = intersect(current, previous)
    if ov is None:
        parts = (current,) if current.area > 0 else ()
        return RegionDecomposition(current, None, parts)

    slabs = (
        Rect(current.x_min, current.y_min, ov.x_min, current.y_max),
        Rect(ov.x_max, current.y_min, current.x_max, current.y_max),
        Rect(ov.x_min, current.y_min, ov.x_max, ov.y_min),
        Rect(ov.x_min, ov.y_max, ov.x_max, current.y_max),
    )
    return RegionDecomposition(current, ov, tuple(r for r in slabs if r.area > 0))


def sample_in(parts: Sequence[Rect], rng: np.random.Generator) -> Point:
    """Uniform point over the union of disjoint rectangles."""
    areas = [p.area for p in parts]
    total = sum(areas)
    if total <= 0:
        raise ZeroAreaRegion("cannot sample from a region of zero area")
    u = rng.random() * total
    chosen = None
    acc = 0.0
    for part, a in zip(parts, areas):
        if a <= 0:
            continue
        chosen = part
        acc += a
        if u < acc:
            break
    return (
        chosen.x_min + rng.random() * chosen.width,
        chosen.y_min + rng.random() * chosen.height,
    )
