"""Planar LiDAR simulated against a ground-truth grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .occupancy import CellState, OccupancyGrid

DEFAULT_MAX_RANGE = 15.0
DEFAULT_BEAM_COUNT = 360


class PoseNotFree(ValueError):
    pass


@dataclass(frozen=True)
class LidarScan:
    """One sweep, already in the map frame.

    ``hits[k]`` is False for beams that reached ``max_range`` (or the map edge)
    without a return; their endpoints still bound free space.
    """

    pose: Tuple[float, float]
    angles: np.ndarray
    ranges: np.ndarray
    hits: np.ndarray
    max_range: float

    @property
    def cos(self) -> np.ndarray:
        return np.cos(self.angles)

    @property
    def sin(self) -> np.ndarray:
        return np.sin(self.angles)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack(
            (self.pose[0] + self.ranges * self.cos, self.pose[1] + self.ranges * self.sin)
        )

    def __len__(self) -> int:
        return len(self.ranges)


def beam_angles(beam_count: int) -> np.ndarray:
    return np.arange(beam_count, dtype=np.float64) * (2.0 * np.pi / beam_count)


def scan(
    truth: OccupancyGrid,
    pose,
    beam_count: int = DEFAULT_BEAM_COUNT,
    max_range: float = DEFAULT_MAX_RANGE,
    rng: Optional[np.random.Generator] = None,
    range_noise: float = 0.0,
) -> LidarScan:
    """Cast ``beam_count`` evenly spaced beams from ``pose``.

    Each range is the distance to the boundary of the first Occupied cell a
    beam enters, or ``max_range``. Gaussian range noise is applied only when
    ``range_noise > 0`` (and then ``rng`` is required).
    """
    if beam_count < 1:
        raise ValueError("beam_count must be >= 1")
    pose = (float(pose[0]), float(pose[1]))
    if not truth.in_bounds(pose) or truth.state_at(pose) != CellState.FREE:
        raise PoseNotFree(f"pose {pose} is not in a Free cell")
    angles = beam_angles(beam_count)
    ranges, hits = kernels.cast_scan(
        truth.cells,
        pose[0],
        pose[1],
        truth.origin[0],
        truth.origin[1],
        truth.resolution,
        np.cos(angles),
        np.sin(angles),
        float(max_range),
    )
    if range_noise > 0:
        if rng is None:
            raise ValueError("range noise needs an rng")
        ranges = np.clip(ranges + rng.normal(0.0, range_noise, size=len(ranges)), 0.0, max_range)
    return LidarScan(pose, angles, ranges, hits, float(max_range))
