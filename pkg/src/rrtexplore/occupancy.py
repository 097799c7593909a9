"""Tri-state occupancy grid: ground truth loading, scan carving, traversal and gain."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence, Tuple, Union

import numpy as np

from . import kernels
from .geometry import Rect


class CellState(IntEnum):
    UNKNOWN = 0
    FREE = 1
    OCCUPIED = 2


class ParseError(ValueError):
    pass


class OutOfBounds(ValueError):
    pass


class PoseOutOfBounds(OutOfBounds):
    pass


class ViewpointNotFree(ValueError):
    pass


@dataclass
class OccupancyGrid:
    """Dense grid of :class:`CellState` values.

    ``cells[row, col]`` covers ``x in origin_x + [col, col+1) * resolution`` and
    ``y in origin_y + [row, row+1) * resolution``; row 0 is the southern edge.
    """

    cells: np.ndarray
    resolution: float
    origin: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        self.cells = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if self.cells.ndim != 2:
            raise ValueError("cells must be 2-D")
        self.origin = (float(self.origin[0]), float(self.origin[1]))

    @classmethod
    def unknown(cls, width: int, height: int, resolution: float, origin=(0.0, 0.0)):
        return cls(np.zeros((height, width), dtype=np.uint8), resolution, origin)

    @classmethod
    def unknown_like(cls, other: "OccupancyGrid") -> "OccupancyGrid":
        return cls.unknown(other.width, other.height, other.resolution, other.origin)

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def extent(self) -> Rect:
        ox, oy = self.origin
        return Rect(ox, oy, ox + self.width * self.resolution, oy + self.height * self.resolution)

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(self.cells.copy(), self.resolution, self.origin)

    def to_grid(self, p: Sequence[float]) -> Tuple[float, float]:
        """Continuous cell coordinates of a map-frame point."""
        return (
            (p[0] - self.origin[0]) / self.resolution,
            (p[1] - self.origin[1]) / self.resolution,
        )

    def to_cell(self, p: Sequence[float]) -> Tuple[int, int]:
        gx, gy = self.to_grid(p)
        return int(np.floor(gx)), int(np.floor(gy))

    def cell_center(self, col: int, row: int) -> Tuple[float, float]:
        return (
            self.origin[0] + (col + 0.5) * self.resolution,
            self.origin[1] + (row + 0.5) * self.resolution,
        )

    def in_bounds(self, p: Sequence[float]) -> bool:
        col, row = self.to_cell(p)
        return 0 <= col < self.width and 0 <= row < self.height

    def state_at(self, p: Sequence[float]) -> CellState:
        if not self.in_bounds(p):
            raise OutOfBounds(f"point {tuple(p)} outside the grid")
        col, row = self.to_cell(p)
        return CellState(int(self.cells[row, col]))

    def is_free(self, p: Sequence[float]) -> bool:
        return self.in_bounds(p) and self.state_at(p) == CellState.FREE

    def known_cells(self) -> int:
        return int(np.count_nonzero(self.cells))

    def explored_area(self) -> float:
        """Area of all non-Unknown cells in m^2."""
        return self.known_cells() * self.resolution**2


# ---------------------------------------------------------------------------
# ground-truth map files
# ---------------------------------------------------------------------------

_GLYPHS = {".": CellState.FREE, "#": CellState.OCCUPIED}


def load_ground_truth(map_text: Union[bytes, str]) -> OccupancyGrid:
    """Parse a ``W H RESOLUTION`` header followed by H rows of W glyphs.

    The first glyph row is the northern edge of the map, so it becomes the
    last grid row.
    """
    if isinstance(map_text, bytes):
        try:
            map_text = map_text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("map file is not ASCII") from exc
    lines = map_text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty map file")
    header = lines[0].split()
    if len(header) != 3:
        raise ParseError(f"bad header {lines[0]!r}")
    try:
        width, height, res = int(header[0]), int(header[1]), float(header[2])
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    if width <= 0 or height <= 0 or not res > 0:
        raise ParseError(f"bad header {lines[0]!r}")
    rows = lines[1:]
    if len(rows) != height:
        raise ParseError(f"expected {height} rows, got {len(rows)}")
    cells = np.empty((height, width), dtype=np.uint8)
    for r, line in enumerate(rows):
        if len(line) != width:
            raise ParseError(f"row {r} has {len(line)} glyphs, expected {width}")
        try:
            cells[height - 1 - r] = [_GLYPHS[ch] for ch in line]
        except KeyError as exc:
            raise ParseError(f"illegal glyph {exc.args[0]!r} in row {r}") from None
    return OccupancyGrid(cells, res)


def dump_ground_truth(grid: OccupancyGrid) -> str:
    if np.any(grid.cells == CellState.UNKNOWN):
        raise ValueError("ground truth must not contain Unknown cells")
    lut = np.array(["?", ".", "#"])
    body = ["".join(lut[row]) for row in grid.cells[::-1]]
    res = repr(float(grid.resolution))
    return f"{grid.width} {grid.height} {res}\n" + "\n".join(body) + "\n"


# ---------------------------------------------------------------------------
# live-map operations
# ---------------------------------------------------------------------------

def integrate_scan(grid: OccupancyGrid, scan) -> OccupancyGrid:
    """Carve a scan into ``grid`` in place (last writer wins) and return it.

    Cells entered by a beam before its return become Free; on a hit, the
    cell the return lies on the boundary of becomes Occupied.
    """
    if not grid.in_bounds(scan.pose):
        raise PoseOutOfBounds(f"pose {scan.pose} outside the grid")
    if len(scan.ranges) == 0:
        return grid
    kernels.carve_scan(
        grid.cells,
        float(scan.pose[0]),
        float(scan.pose[1]),
        grid.origin[0],
        grid.origin[1],
        grid.resolution,
        np.ascontiguousarray(scan.cos, dtype=np.float64),
        np.ascontiguousarray(scan.sin, dtype=np.float64),
        np.ascontiguousarray(scan.ranges, dtype=np.float64),
        np.ascontiguousarray(scan.hits, dtype=np.bool_).view(np.uint8),
    )
    return grid


def segment_is_traversable(grid: OccupancyGrid, a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff every cell touched by segment a-b is Free (supercover)."""
    if not grid.in_bounds(a) or not grid.in_bounds(b):
        raise OutOfBounds(f"segment {tuple(a)}-{tuple(b)} leaves the grid")
    ga = grid.to_grid(a)
    gb = grid.to_grid(b)
    return bool(kernels.segment_free(grid.cells, ga[0], ga[1], gb[0], gb[1]))


def exploration_gain(grid: OccupancyGrid, viewpoint: Sequence[float], gain_radius: float) -> float:
    """Visible Unknown area (m^2) within ``gain_radius`` of the viewpoint.

    A cell counts when its centre is within the radius and the straight
    segment from the viewpoint to that centre touches no Occupied cell.
    """
    if not grid.is_free(viewpoint):
        raise ViewpointNotFree(f"viewpoint {tuple(viewpoint)} is not in a Free cell")
    gx, gy = grid.to_grid(viewpoint)
    n = kernels.gain_count(grid.cells, gx, gy, gain_radius / grid.resolution)
    return n * grid.resolution**2
