"""Sliding windows: adaptive (scan bounding box) and fixed (sensor range square)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Rect, RegionDecomposition, decompose

DEFAULT_MIN_WINDOW_SIDE = 2.0
DEFAULT_HALF_EXTENT = 15.0


class EmptyScan(ValueError):
    pass


def adaptive_window(scan, min_window_side: float = DEFAULT_MIN_WINDOW_SIDE) -> Rect:
    """Smallest axis-aligned rectangle holding every scan return and the pose.

    Max-range (no-hit) returns are included. Each side is then grown
    symmetrically to at least ``min_window_side``.
    """
    if len(scan) == 0:
        raise EmptyScan("scan has no points")
    pts = np.vstack((scan.points, np.asarray(scan.pose, dtype=float)[None, :]))
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    if x1 - x0 < min_window_side:
        cx = 0.5 * (x0 + x1)
        x0, x1 = cx - 0.5 * min_window_side, cx + 0.5 * min_window_side
    if y1 - y0 < min_window_side:
        cy = 0.5 * (y0 + y1)
        y0, y1 = cy - 0.5 * min_window_side, cy + 0.5 * min_window_side
    return Rect(float(x0), float(y0), float(x1), float(y1))


def fixed_window(pose, half_extent: float = DEFAULT_HALF_EXTENT) -> Rect:
    if not half_extent > 0:
        raise ValueError("half_extent must be positive")
    x, y = float(pose[0]), float(pose[1])
    return Rect(x - half_extent, y - half_extent, x + half_extent, y + half_extent)


@dataclass(frozen=True)
class WindowState:
    current: Rect
    previous: Optional[Rect]
    decomposition: RegionDecomposition

    @classmethod
    def first(cls, window: Rect) -> "WindowState":
        return cls(window, None, decompose(window, None))

    def advance(self, new_window: Rect) -> "WindowState":
        return advance(self, new_window)


def advance(state: Optional[WindowState], new_window: Rect) -> WindowState:
    """Shift ``current`` to ``previous`` and recompute the decomposition."""
    if state is None:
        return WindowState.first(new_window)
    return WindowState(new_window, state.current, decompose(new_window, state.current))
