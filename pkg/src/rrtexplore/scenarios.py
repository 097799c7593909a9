"""Desk-scale benchmark worlds, generated deterministically at 0.25 m.

``corridors``  narrow indoor passages with rooms off them
``forest``     scattered round trunks in an open field
``garage``     large halls with a pillar grid, linked by wide openings
``maze50``     50 x 50 m perfect maze (completeness checks only)
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Callable, Dict

import numpy as np

from .occupancy import CellState, OccupancyGrid, dump_ground_truth, load_ground_truth

RES = 0.25
BENCH_SCENARIOS = ("corridors", "forest", "garage")


def _blank(width_m: float, height_m: float) -> OccupancyGrid:
    w, h = int(round(width_m / RES)), int(round(height_m / RES))
    return OccupancyGrid(np.full((h, w), CellState.OCCUPIED, dtype=np.uint8), RES)


def _fill(grid: OccupancyGrid, x0, y0, x1, y1, state):
    """Set every cell whose centre lies inside [x0, x1] x [y0, y1]."""
    c0 = int(np.ceil(x0 / RES - 0.5))
    c1 = int(np.floor(x1 / RES - 0.5))
    r0 = int(np.ceil(y0 / RES - 0.5))
    r1 = int(np.floor(y1 / RES - 0.5))
    grid.cells[max(r0, 0): r1 + 1, max(c0, 0): c1 + 1] = state


def _border(grid: OccupancyGrid, thickness=0.5):
    w, h = grid.width * RES, grid.height * RES
    _fill(grid, thickness, thickness, w - thickness, h - thickness, CellState.FREE)


def corridors() -> OccupancyGrid:
    g = _blank(60, 40)
    F = CellState.FREE
    # corridors
    _fill(g, 0.5, 18.75, 59.5, 21.25, F)
    for x in (14.75, 42.75):
        _fill(g, x, 0.5, x + 2.5, 39.5, F)
    # rooms: (x0, x1) spans per block, for the south and north rows
    spans = [(0.5, 14.25), (17.75, 29.75), (30.25, 42.25), (45.75, 59.5)]
    for y0, y1, door_y0, door_y1 in ((0.5, 18.25, 18.25, 18.75), (21.75, 39.5, 21.25, 21.75)):
        for x0, x1 in spans:
            # split tall blocks into two rooms stacked away from the corridor
            if y0 < 10:
                _fill(g, x0, y0, x1, 8.75, F)
                _fill(g, x0, 9.25, x1, y1, F)
                mid = 0.5 * (x0 + x1)
                _fill(g, mid - 0.75, 8.75, mid + 0.75, 9.25, F)
            else:
                _fill(g, x0, y0, x1, 30.75, F)
                _fill(g, x0, 31.25, x1, y1, F)
                mid = 0.5 * (x0 + x1)
                _fill(g, mid + 2.0, 30.75, mid + 3.5, 31.25, F)
            mid = 0.5 * (x0 + x1)
            _fill(g, mid - 0.75, door_y0, mid + 0.75, door_y1, F)
    # a few doors onto the vertical corridors
    _fill(g, 14.25, 4.0, 14.75, 5.5, F)
    _fill(g, 17.25, 34.0, 17.75, 35.5, F)
    _fill(g, 45.25, 12.0, 45.75, 13.5, F)
    _fill(g, 42.25, 25.0, 42.75, 26.5, F)
    return g


def forest(seed: int = 7) -> OccupancyGrid:
    g = _blank(60, 60)
    _border(g)
    rng = np.random.default_rng(seed)
    centers = []
    tries = 0
    while len(centers) < 110 and tries < 20000:
        tries += 1
        c = rng.uniform(2.0, 58.0, size=2)
        if np.hypot(c[0] - 30.0, c[1] - 30.0) < 2.5:
            continue
        if any(np.hypot(*(c - q)) < 3.0 for q in centers):
            continue
        centers.append(c)
    ys, xs = np.mgrid[0: g.height, 0: g.width]
    cx, cy = (xs + 0.5) * RES, (ys + 0.5) * RES
    for c in centers:
        r = rng.uniform(0.3, 0.7)
        g.cells[(cx - c[0]) ** 2 + (cy - c[1]) ** 2 <= r * r] = CellState.OCCUPIED
    return g


def garage() -> OccupancyGrid:
    g = _blank(80, 50)
    _border(g)
    O, F = CellState.OCCUPIED, CellState.FREE
    # hall divider with three wide openings
    _fill(g, 39.75, 0.5, 40.25, 49.5, O)
    for y0 in (6.0, 22.0, 40.0):
        _fill(g, 39.75, y0, 40.25, y0 + 6.0, F)
    # left hall split into two bays
    _fill(g, 0.5, 24.75, 39.75, 25.25, O)
    for x0 in (8.0, 28.0):
        _fill(g, x0, 24.75, x0 + 6.0, 25.25, F)
    # pillar grid
    for px in np.arange(6.0, 80.0, 8.0):
        for py in np.arange(6.0, 50.0, 8.0):
            if abs(px - 40.0) < 2.0:
                continue
            _fill(g, px - 0.375, py - 0.375, px + 0.375, py + 0.375, O)
    return g


def maze50(seed: int = 3, cell_m: float = 5.0, wall: float = 0.5) -> OccupancyGrid:
    n = int(50 / cell_m)
    g = _blank(50, 50)
    F = CellState.FREE
    rng = np.random.default_rng(seed)
    for i in range(n):
        for j in range(n):
            _fill(g, i * cell_m + wall, j * cell_m + wall, (i + 1) * cell_m - wall / 2 + 0.0, (j + 1) * cell_m - wall / 2, F)
    # recursive backtracker over the cell lattice
    seen = np.zeros((n, n), dtype=bool)
    stack = [(n // 2, n // 2)]
    seen[n // 2, n // 2] = True
    while stack:
        i, j = stack[-1]
        nbrs = [(i + di, j + dj) for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 0 <= i + di < n and 0 <= j + dj < n and not seen[i + di, j + dj]]
        if not nbrs:
            stack.pop()
            continue
        a, b = nbrs[rng.integers(len(nbrs))]
        seen[a, b] = True
        lo_i, lo_j = min(i, a), min(j, b)
        if a != i:
            x = (lo_i + 1) * cell_m
            _fill(g, x - wall, j * cell_m + wall, x + wall, (j + 1) * cell_m - wall / 2, F)
        else:
            y = (lo_j + 1) * cell_m
            _fill(g, i * cell_m + wall, y - wall, (i + 1) * cell_m - wall / 2, y + wall, F)
        stack.append((a, b))
    _fill(g, 0, 0, 50, wall, CellState.OCCUPIED)
    _fill(g, 0, 0, wall, 50, CellState.OCCUPIED)
    _fill(g, 0, 50 - wall, 50, 50, CellState.OCCUPIED)
    _fill(g, 50 - wall, 0, 50, 50, CellState.OCCUPIED)
    return g


BUILDERS: Dict[str, Callable[[], OccupancyGrid]] = {
    "corridors": corridors,
    "forest": forest,
    "garage": garage,
    "maze50": maze50,
}


def bundled_path(name: str) -> Path:
    sub = "scenarios" if name in BENCH_SCENARIOS else "extra"
    return Path(str(resources.files("rrtexplore") / "data" / sub / f"{name}.map"))


def bundled_scenario_dir() -> Path:
    return Path(str(resources.files("rrtexplore") / "data" / "scenarios"))


def load(name: str) -> OccupancyGrid:
    """Bundled map by name."""
    return load_ground_truth(bundled_path(name).read_bytes())


def write_all(out_dir) -> None:
    out = Path(out_dir)
    for name, build in BUILDERS.items():
        sub = out / ("scenarios" if name in BENCH_SCENARIOS else "extra")
        sub.mkdir(parents=True, exist_ok=True)
        (sub / f"{name}.map").write_text(dump_ground_truth(build()))
