"""Closed-loop exploration: scan, map, detect, pick a frontier, drive."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .detector import DetectorConfig, NoFreeSpace, make_detector, rank_frontiers
from .lidar import scan as lidar_scan
from .metrics import WindowDensity, WindowMetrics
from .occupancy import CellState, OccupancyGrid, exploration_gain, integrate_scan

COMPLETE = "Complete"
BUDGET = "Budget"
STUCK = "Stuck"


class InvalidStart(ValueError):
    pass


@dataclass
class RunConfig:
    detector: str = "adaptive"
    seed: int = 0
    map: str = ""
    # detector
    theta: float = 1.0
    tau: int = 900
    step: float = 1.0
    min_exploration_gain: float = 2.0
    gain_radius: float = 5.0
    attempt_cap_factor: int = 50
    bias_probability: float = 0.2
    bias_radius: float = 3.0
    min_window_side: float = 2.0
    half_extent: float = 15.0
    # sensor
    beam_count: int = 360
    max_range: float = 15.0
    range_noise: float = 0.0
    # robot and loop
    speed: float = 2.0
    dt: float = 0.1
    scan_period: float = 0.5
    time_budget: float = 1500.0
    max_windows: int = 0
    empty_windows_to_stop: int = 3
    goal_candidates: int = 8
    start_x: Optional[float] = None
    start_y: Optional[float] = None
    audit: bool = False
    timing: bool = True

    def detector_config(self) -> DetectorConfig:
        names = {f.name for f in dataclasses.fields(DetectorConfig)}
        return DetectorConfig(**{k: getattr(self, k) for k in names})

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _coerce(name: str, default, text: str):
    text = text.strip()
    if name in ("start_x", "start_y"):
        return None if text.lower() in ("", "none") else float(text)
    if isinstance(default, bool):
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{name}: expected a boolean, got {text!r}")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Read ``key = value`` lines (``#`` starts a comment) over ``base`` defaults."""
    cfg = base or RunConfig()
    defaults = {f.name: getattr(cfg, f.name) for f in dataclasses.fields(RunConfig)}
    changes = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in defaults:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        changes[key] = _coerce(key, RunConfig.__dataclass_fields__[key].default, value)
    return dataclasses.replace(cfg, **changes)


def format_config(cfg: RunConfig) -> str:
    lines = []
    for f in dataclasses.fields(RunConfig):
        v = getattr(cfg, f.name)
        lines.append(f"{f.name} = {'none' if v is None else v}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# path planning and start selection
# ---------------------------------------------------------------------------

def plan_path(grid: OccupancyGrid, start: Sequence[float], goal: Sequence[float]) -> Optional[List[Tuple[float, float]]]:
    """Shortest 8-connected path over Free cells, as cell-centre waypoints.

    Diagonal moves need both side cells Free, so the path never clips a
    corner of an obstacle.
    """
    if not grid.in_bounds(start) or not grid.in_bounds(goal):
        return None
    sc, sr = grid.to_cell(start)
    gc, gr = grid.to_cell(goal)
    cells = kernels.astar(grid.cells, sc, sr, gc, gr)
    if cells is None:
        return None
    return [grid.cell_center(int(c), int(r)) for c, r in cells]


def path_length(path: Sequence[Sequence[float]]) -> float:
    return float(sum(math.dist(a, b) for a, b in zip(path, path[1:])))


def default_start(truth: OccupancyGrid, clearance_cells: int = 2) -> Tuple[float, float]:
    """Centre of the Free cell nearest the map centre with a clear neighbourhood."""
    free = truth.cells == CellState.FREE
    k = 2 * clearance_cells + 1
    if free.shape[0] >= k and free.shape[1] >= k:
        win = np.lib.stride_tricks.sliding_window_view(free, (k, k))
        clear = np.zeros_like(free)
        clear[clearance_cells:-clearance_cells or None, clearance_cells:-clearance_cells or None] = win.all(axis=(2, 3))
        if clear.any():
            free = clear
    rows, cols = np.nonzero(free)
    if len(rows) == 0:
        raise InvalidStart("map has no Free cell")
    cy, cx = (truth.height - 1) / 2.0, (truth.width - 1) / 2.0
    d2 = (rows - cy) ** 2 + (cols - cx) ** 2
    i = int(np.lexsort((cols, rows, d2))[0])
    return truth.cell_center(int(cols[i]), int(rows[i]))


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    detector: str
    seed: int
    explored_series: List[Tuple[float, float]]
    distance_series: List[Tuple[float, float]]
    window_metrics: List[WindowMetrics]
    window_densities: List[WindowDensity]
    termination: str
    sim_time: float
    final_map: Optional[OccupancyGrid] = None
    trajectory: List[Tuple[float, float]] = field(default_factory=list)
    audit_checked: int = 0
    audit_failures: List[str] = field(default_factory=list)

    @property
    def explored_volume(self) -> float:
        return self.explored_series[-1][1] if self.explored_series else 0.0

    @property
    def distance(self) -> float:
        return self.distance_series[-1][1] if self.distance_series else 0.0

    @property
    def efficiency(self) -> float:
        return self.explored_volume / self.sim_time if self.sim_time > 0 else 0.0


def _segment_cells_sampled(grid: OccupancyGrid, a, b, per_cell: int = 50):
    ga = np.asarray(grid.to_grid(a))
    gb = np.asarray(grid.to_grid(b))
    n = max(2, int(np.ceil(np.abs(gb - ga).max() * per_cell)) + 1)
    t = np.linspace(0.0, 1.0, n)[:, None]
    pts = np.floor(ga + t * (gb - ga)).astype(np.int64)
    return pts


def _audit_window(detector, grid: OccupancyGrid, failures: List[str]) -> int:
    """Re-check nodes added in the latest window against the current map."""
    f = detector.forest
    w = detector.state.current
    idx = detector.window_index
    checked = 0
    for k in np.flatnonzero(f.window[: f.n] == idx):
        p = (float(f.pos[k, 0]), float(f.pos[k, 1]))
        checked += 1
        if not w.contains(p):
            failures.append(f"window {idx}: node {f.ids[k]} outside window")
        if not grid.is_free(p):
            failures.append(f"window {idx}: node {f.ids[k]} not in a Free cell")
        par = int(f.parent[k])
        if par >= 0:
            j = f.slot_of(par)
            if j < 0:
                failures.append(f"window {idx}: node {f.ids[k]} has a missing parent")
                continue
            cells = _segment_cells_sampled(grid, f.pos[j], p)
            ok = (
                (cells[:, 0] >= 0).all()
                and (cells[:, 1] >= 0).all()
                and (cells[:, 0] < grid.width).all()
                and (cells[:, 1] < grid.height).all()
                and (grid.cells[cells[:, 1], cells[:, 0]] == CellState.FREE).all()
            )
            if not ok:
                failures.append(f"window {idx}: edge {par}->{f.ids[k]} crosses a non-Free cell")
    return checked


class _FrontierMemory:
    """Frontiers seen in earlier windows, one per cell, dropped once exhausted."""

    def __init__(self):
        self.points: Dict[Tuple[int, int], Tuple[float, float]] = {}

    def add(self, grid: OccupancyGrid, frontiers):
        for p, _ in frontiers:
            self.points.setdefault(grid.to_cell(p), p)

    def valid(self, grid: OccupancyGrid, radius: float, min_gain: float):
        out = []
        for key in sorted(self.points):
            p = self.points[key]
            if grid.is_free(p) and exploration_gain(grid, p, radius) > min_gain:
                out.append(p)
            else:
                del self.points[key]
        return out

    def drop(self, grid: OccupancyGrid, p):
        self.points.pop(grid.to_cell(p), None)


def run(truth: OccupancyGrid, cfg: RunConfig, rng: Optional[np.random.Generator] = None, keep_map: bool = False) -> RunResult:
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if cfg.start_x is not None and cfg.start_y is not None:
        pose = (float(cfg.start_x), float(cfg.start_y))
    else:
        pose = default_start(truth)
    if not truth.is_free(pose):
        raise InvalidStart(f"start {pose} is not in a Free cell")

    dcfg = cfg.detector_config()
    detector = make_detector(cfg.detector, dcfg)
    live = OccupancyGrid.unknown_like(truth)
    memory = _FrontierMemory()
    n_sub = max(1, int(round(cfg.scan_period / cfg.dt)))
    move_per_sub = cfg.speed * cfg.dt

    def sense(p):
        s = lidar_scan(truth, p, cfg.beam_count, cfg.max_range, rng, cfg.range_noise)
        integrate_scan(live, s)
        return s

    t = 0.0
    dist = 0.0
    current = sense(pose)
    explored = [(t, live.explored_area())]
    distance = [(t, dist)]
    trajectory = [pose]
    metrics: List[WindowMetrics] = []
    densities: List[WindowDensity] = []
    failures: List[str] = []
    checked = 0
    goal: Optional[Tuple[float, float]] = None
    path: List[Tuple[float, float]] = []
    empty_streak = 0
    termination = BUDGET

    while True:
        if t >= cfg.time_budget or (cfg.max_windows and len(metrics) >= cfg.max_windows):
            termination = BUDGET
            break
        try:
            report = detector.update(current, live, rng)
        except NoFreeSpace:
            report = None
        w = len(metrics)
        if report is not None:
            metrics.append(
                WindowMetrics(
                    window_index=w,
                    detector=cfg.detector,
                    seed=cfg.seed,
                    attempts=report.attempts,
                    successes=report.successes,
                    p=WindowMetrics.attempts_per_success(report.attempts, report.successes),
                    duration_s=report.wall_time if cfg.timing else 0.0,
                    s_total=report.s_total,
                    s_o=report.s_o,
                    s_n=report.s_n,
                    n_frontiers=len(report.frontiers),
                )
            )
            densities.append(
                WindowDensity(w, report.s_o, report.s_n, report.nodes_overlap,
                              report.nodes_non_overlap, report.successes, report.successes_non_overlap)
            )
            frontiers = report.frontiers
            if cfg.audit:
                checked += _audit_window(detector, live, failures)
        else:
            st = detector.state
            metrics.append(WindowMetrics(w, cfg.detector, cfg.seed, 0, 0, 0.0, 0.0,
                                         st.current.area, st.decomposition.s_o, st.decomposition.s_n, 0))
            densities.append(WindowDensity(w, st.decomposition.s_o, st.decomposition.s_n, 0, 0, 0, 0))
            frontiers = []

        memory.add(live, frontiers)
        empty_streak = 0 if frontiers else empty_streak + 1

        if goal is not None and (not path or exploration_gain(live, goal, dcfg.gain_radius) <= dcfg.min_exploration_gain):
            memory.drop(live, goal)
            goal, path = None, []
        if goal is None:
            goal, path, tried = _choose_goal(live, pose, frontiers, memory, cfg, dcfg)
            if goal is None:
                if tried:
                    termination = STUCK
                    break
                if empty_streak >= cfg.empty_windows_to_stop:
                    termination = COMPLETE
                    break

        for _ in range(n_sub):
            if path:
                pose, moved, path = _advance_along(pose, path, move_per_sub)
                dist += moved
                trajectory.append(pose)
        t += cfg.scan_period
        current = sense(pose)
        explored.append((t, live.explored_area()))
        distance.append((t, dist))

    return RunResult(
        detector=cfg.detector,
        seed=cfg.seed,
        explored_series=explored,
        distance_series=distance,
        window_metrics=metrics,
        window_densities=densities,
        termination=termination,
        sim_time=t,
        final_map=live if keep_map else None,
        trajectory=trajectory,
        audit_checked=checked,
        audit_failures=failures,
    )


def _choose_goal(live, pose, frontiers, memory, cfg, dcfg):
    """Pick the best reachable frontier from this window, then from memory,
    then the nearest frontier cell of the live map.

    Returns ``(goal, path, tried)`` where ``tried`` tells whether any
    candidate existed at all.
    """
    tried = False
    for p, _ in rank_frontiers(frontiers, pose)[: cfg.goal_candidates]:
        tried = True
        path = plan_path(live, pose, p)
        if path is not None:
            return p, path, tried
        memory.drop(live, p)
    remembered = memory.valid(live, dcfg.gain_radius, dcfg.min_exploration_gain)
    remembered.sort(key=lambda q: (math.dist(q, pose), q))
    for p in remembered[: cfg.goal_candidates]:
        tried = True
        path = plan_path(live, pose, p)
        if path is not None:
            return p, path, tried
        memory.drop(live, p)
    # last resort: nearest map frontier cell, found by a search over the live map
    res = live.resolution
    c, r = live.to_cell(pose)
    cell = kernels.nearest_frontier_cell(live.cells, c, r, dcfg.gain_radius / res, dcfg.min_exploration_gain / (res * res))
    if cell is not None:
        p = live.cell_center(*cell)
        path = plan_path(live, pose, p)
        if path is not None:
            return p, path, True
    return None, [], tried


def _advance_along(pose, path, step):
    """Move up to ``step`` metres along the waypoint list; consumed waypoints are removed."""
    moved = 0.0
    x, y = pose
    path = list(path)
    while path and moved < step:
        tx, ty = path[0]
        d = math.hypot(tx - x, ty - y)
        left = step - moved
        if d <= left:
            x, y = tx, ty
            moved += d
            path.pop(0)
        else:
            f = left / d
            x, y = x + (tx - x) * f, y + (ty - y) * f
            moved += left
    return (x, y), moved, path
