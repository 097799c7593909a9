"""RRT frontier detection inside sliding windows.

Two detectors share one forest implementation:

* :class:`AdaptiveDetector` - window is the scan's bounding box and samples
  are split between the overlap and non-overlap regions by a
  :class:`~rrtexplore.sampler.SamplingPlan`.
* :class:`FixedWindowDetector` - fixed sensor-range square, uniform
  samples with a share drawn around the current best frontier.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .geometry import Rect, sample_in
from .occupancy import OccupancyGrid
from .spatial import KdTree
from .sampler import Region, SamplingPlan, compute_plan, draw_region, window_budget
from .window import WindowState, adaptive_window, advance, fixed_window

Frontier = Tuple[Tuple[float, float], float]


class NoFreeSpace(RuntimeError):
    """The attempt cap was reached without a single node being added."""


@dataclass
class DetectorConfig:
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


# ---------------------------------------------------------------------------
# forest
# ---------------------------------------------------------------------------

class RrtForest:
    """Retained RRT nodes in insertion order with a kd-tree over their positions.

    Node ids grow monotonically and are never reused; ``parent`` holds an id
    or -1. Slots are compacted on :meth:`keep`.
    """

    def __init__(self, capacity: int = 512):
        self.pos = np.empty((capacity, 2), dtype=np.float64)
        self.ids = np.empty(capacity, dtype=np.int64)
        self.parent = np.empty(capacity, dtype=np.int64)
        self.gain = np.empty(capacity, dtype=np.float64)
        self.window = np.empty(capacity, dtype=np.int64)
        self.n = 0
        self.next_id = 0
        self.kd = KdTree(capacity)

    def __len__(self) -> int:
        return self.n

    def _grow(self):
        cap = 2 * len(self.ids)
        for name in ("pos", "ids", "parent", "gain", "window"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self.n] = old[: self.n]
            setattr(self, name, new)

    def add(self, x: float, y: float, parent: int, gain: float, window: int) -> int:
        if self.n == len(self.ids):
            self._grow()
        k = self.n
        self.pos[k, 0] = x
        self.pos[k, 1] = y
        self.ids[k] = self.next_id
        self.parent[k] = parent
        self.gain[k] = gain
        self.window[k] = window
        self.kd.insert(x, y)
        self.n += 1
        self.next_id += 1
        return k

    def nearest(self, x: float, y: float) -> int:
        return self.kd.nearest(x, y)[0]

    def positions(self) -> np.ndarray:
        return self.pos[: self.n]

    def slot_of(self, node_id: int) -> int:
        k = int(np.searchsorted(self.ids[: self.n], node_id))
        if k < self.n and self.ids[k] == node_id:
            return k
        return -1

    def keep(self, mask: np.ndarray) -> None:
        """Retain only the slots where ``mask`` is true and rebuild the index."""
        m = self.n
        sel = np.flatnonzero(mask[:m])
        k = len(sel)
        for name in ("pos", "ids", "parent", "gain", "window"):
            arr = getattr(self, name)
            arr[:k] = arr[sel]
        self.n = k
        self.kd.reset()
        for i in range(k):
            self.kd.insert(self.pos[i, 0], self.pos[i, 1])

    def frontier_slots(self, min_gain: float) -> np.ndarray:
        return np.flatnonzero(self.gain[: self.n] > min_gain)


# ---------------------------------------------------------------------------
# primitive steps
# ---------------------------------------------------------------------------

def steer(nearest: Sequence[float], rand: Sequence[float], step: float) -> Tuple[float, float]:
    """Point at distance ``min(step, |rand - nearest|)`` from ``nearest`` towards ``rand``."""
    nx, ny = float(nearest[0]), float(nearest[1])
    dx, dy = float(rand[0]) - nx, float(rand[1]) - ny
    d = math.hypot(dx, dy)
    if d <= step:
        return float(rand[0]), float(rand[1])
    f = step / d
    return nx + dx * f, ny + dy * f


def _traversable(grid: OccupancyGrid, a, b) -> bool:
    # out-of-grid cells count as blocked inside the kernel
    ox, oy = grid.origin
    r = grid.resolution
    return kernels.segment_free(
        grid.cells, (a[0] - ox) / r, (a[1] - oy) / r, (b[0] - ox) / r, (b[1] - oy) / r
    )


def _gain(grid: OccupancyGrid, p, radius: float) -> float:
    ox, oy = grid.origin
    r = grid.resolution
    return kernels.gain_count(grid.cells, (p[0] - ox) / r, (p[1] - oy) / r, radius / r) * r * r


def discard_outside(forest: RrtForest, window: Rect, grid: OccupancyGrid) -> int:
    """Drop nodes outside ``window``; re-parent or drop their orphans.

    An orphan is re-parented to the nearest earlier retained node when that
    edge is traversable on ``grid``; otherwise it is dropped as well, which
    may orphan its own children in turn. Returns the retained count.
    """
    n = forest.n
    if n == 0:
        return 0
    pos = forest.pos[:n]
    keep = window.contains_many(pos)
    if keep.all():
        return n
    alive = {int(i) for i, k in zip(forest.ids[:n], keep) if k}
    for k in range(n):
        if not keep[k]:
            continue
        par = int(forest.parent[k])
        if par < 0 or par in alive:
            continue
        earlier = np.flatnonzero(keep[:k])
        if len(earlier) == 0:
            forest.parent[k] = -1
            continue
        d2 = ((pos[earlier] - pos[k]) ** 2).sum(axis=1)
        j = int(earlier[int(np.argmin(d2))])
        if _traversable(grid, pos[j], pos[k]):
            forest.parent[k] = forest.ids[j]
        else:
            keep[k] = False
            alive.discard(int(forest.ids[k]))
    forest.keep(keep)
    return forest.n


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class DetectorReport:
    frontiers: List[Frontier]
    attempts: int
    successes: int
    budget: int
    wall_time: float = 0.0
    window: Optional[Rect] = None
    s_o: float = 0.0
    s_n: float = 0.0
    n_nodes: int = 0
    nodes_overlap: int = 0
    nodes_non_overlap: int = 0
    successes_non_overlap: int = 0
    plan: Optional[SamplingPlan] = None

    @property
    def s_total(self) -> float:
        return self.window.area if self.window is not None else 0.0


def _priority_key(frontier: Frontier, pose) -> tuple:
    (x, y), g = frontier
    d = math.hypot(x - pose[0], y - pose[1]) if pose is not None else 0.0
    return (-g, d, x, y)


def rank_frontiers(frontiers: Sequence[Frontier], pose=None) -> List[Frontier]:
    """Highest gain first; ties by distance to ``pose`` then by position."""
    return sorted(frontiers, key=lambda f: _priority_key(f, pose))


def best_frontier(report: DetectorReport, pose=None) -> Optional[Frontier]:
    if not report.frontiers:
        return None
    return min(report.frontiers, key=lambda f: _priority_key(f, pose))


def _frontiers_of(forest: RrtForest, min_gain: float) -> List[Frontier]:
    return [
        ((float(forest.pos[k, 0]), float(forest.pos[k, 1])), float(forest.gain[k]))
        for k in forest.frontier_slots(min_gain)
    ]


def _finish(report: DetectorReport, forest: RrtForest, state: Optional[WindowState], first_new: int, cfg):
    report.frontiers = _frontiers_of(forest, cfg.min_exploration_gain)
    report.n_nodes = forest.n
    if state is not None:
        d = state.decomposition
        report.window = state.current
        report.s_o = d.s_o
        report.s_n = d.s_n
        in_ov = d.in_overlap(forest.positions())
        report.nodes_overlap = int(in_ov.sum())
        report.nodes_non_overlap = forest.n - report.nodes_overlap
        report.successes_non_overlap = int((~in_ov[first_new:]).sum())
    return report


def _check_no_free_space(attempts, cap, successes, forest, seeded):
    if successes == 0 and attempts >= cap and cap > 0 and forest.n <= (1 if seeded else 0):
        raise NoFreeSpace(f"no node added in {attempts} attempts")


# ---------------------------------------------------------------------------
# expansion loops
# ---------------------------------------------------------------------------

def expand_window(
    forest: RrtForest,
    plan: SamplingPlan,
    window_state: WindowState,
    grid: OccupancyGrid,
    cfg: DetectorConfig,
    rng: np.random.Generator,
    window_index: int = 0,
    seeded: bool = False,
) -> DetectorReport:
    """Grow the forest until the window's node budget or the attempt cap is reached."""
    decomp = window_state.decomposition
    budget = window_budget(cfg.theta, cfg.tau, window_state.current.area)
    cap = cfg.attempt_cap_factor * budget
    overlap_parts = decomp.overlap_parts
    non_parts = decomp.non_overlap_parts
    first_new = forest.n
    attempts = successes = 0
    step, radius = cfg.step, cfg.gain_radius

    # the seed root is not a sampled node and does not count towards the budget
    counted = forest.n - (1 if seeded else 0)
    while counted + successes < budget and attempts < cap and not plan.saturated and forest.n > 0:
        attempts += 1
        region = draw_region(plan, rng)
        parts = overlap_parts if region is Region.OVERLAP else non_parts
        rand = sample_in(parts, rng)
        k = forest.nearest(rand[0], rand[1])
        near = forest.pos[k]
        new = steer(near, rand, step)
        if not _traversable(grid, near, new):
            continue
        forest.add(new[0], new[1], int(forest.ids[k]), _gain(grid, new, radius), window_index)
        successes += 1

    _check_no_free_space(attempts, cap, successes, forest, seeded)
    report = DetectorReport([], attempts, successes, budget, plan=plan)
    return _finish(report, forest, window_state, first_new, cfg)


def _sample_disc_in_window(center, radius, window: Rect, rng, tries: int = 16):
    for _ in range(tries):
        r = radius * math.sqrt(rng.random())
        a = 2.0 * math.pi * rng.random()
        p = (center[0] + r * math.cos(a), center[1] + r * math.sin(a))
        if window.contains(p):
            return p
    return None


def baseline_expand(
    forest: RrtForest,
    window: Rect,
    grid: OccupancyGrid,
    cfg: DetectorConfig,
    rng: np.random.Generator,
    window_index: int = 0,
    pose=None,
    window_state: Optional[WindowState] = None,
    seeded: bool = False,
) -> DetectorReport:
    """Uniform sampling over the fixed window, biased towards the best frontier.

    With probability ``cfg.bias_probability`` a sample is drawn from the disc
    of ``cfg.bias_radius`` around the current best frontier (when one exists),
    otherwise uniformly over the whole window. Stops at ``cfg.tau`` nodes.
    """
    budget = int(cfg.tau)
    cap = cfg.attempt_cap_factor * budget
    counted = forest.n - (1 if seeded else 0)
    first_new = forest.n
    attempts = successes = 0
    step, radius, min_gain = cfg.step, cfg.gain_radius, cfg.min_exploration_gain
    parts = (window,)

    best: Optional[Frontier] = None
    for f in _frontiers_of(forest, min_gain):
        if best is None or _priority_key(f, pose) < _priority_key(best, pose):
            best = f

    while counted + successes < budget and attempts < cap and forest.n > 0:
        attempts += 1
        rand = None
        if best is not None and rng.random() < cfg.bias_probability:
            rand = _sample_disc_in_window(best[0], cfg.bias_radius, window, rng)
        if rand is None:
            rand = sample_in(parts, rng)
        k = forest.nearest(rand[0], rand[1])
        near = forest.pos[k]
        new = steer(near, rand, step)
        if not _traversable(grid, near, new):
            continue
        g = _gain(grid, new, radius)
        forest.add(new[0], new[1], int(forest.ids[k]), g, window_index)
        successes += 1
        if g > min_gain:
            cand = (new, g)
            if best is None or _priority_key(cand, pose) < _priority_key(best, pose):
                best = cand

    _check_no_free_space(attempts, cap, successes, forest, seeded)
    report = DetectorReport([], attempts, successes, budget)
    return _finish(report, forest, window_state, first_new, cfg)


# ---------------------------------------------------------------------------
# per-window drivers
# ---------------------------------------------------------------------------

@dataclass
class _DetectorBase:
    cfg: DetectorConfig = field(default_factory=DetectorConfig)
    forest: RrtForest = field(default_factory=RrtForest)
    state: Optional[WindowState] = None
    window_index: int = -1

    name = "base"

    def _window(self, scan) -> Rect:
        raise NotImplementedError

    def _prepare(self, scan, grid: OccupancyGrid) -> Tuple[int, bool]:
        self.window_index += 1
        self.state = advance(self.state, self._window(scan))
        n_o = discard_outside(self.forest, self.state.current, grid)
        self._refresh_gains(grid)
        seeded = False
        if self.forest.n == 0 and grid.is_free(scan.pose) and self.state.current.contains(scan.pose):
            pose = scan.pose
            self.forest.add(pose[0], pose[1], -1, _gain(grid, pose, self.cfg.gain_radius), self.window_index)
            seeded = True
        return n_o, seeded

    def _refresh_gains(self, grid):
        # Gain never grows as cells leave Unknown, so only current frontiers
        # can change status; non-frontier gains stay valid upper bounds.
        f = self.forest
        for k in f.frontier_slots(self.cfg.min_exploration_gain):
            f.gain[k] = _gain(grid, f.pos[k], self.cfg.gain_radius)

    def update(self, scan, grid: OccupancyGrid, rng: np.random.Generator) -> DetectorReport:
        t0 = time.perf_counter()
        report = self._run(scan, grid, rng)
        report.wall_time = time.perf_counter() - t0
        return report

    def _run(self, scan, grid, rng) -> DetectorReport:
        raise NotImplementedError


class AdaptiveDetector(_DetectorBase):
    name = "adaptive"

    def _window(self, scan) -> Rect:
        return adaptive_window(scan, self.cfg.min_window_side)

    def _run(self, scan, grid, rng):
        _, seeded = self._prepare(scan, grid)
        in_ov = self.state.decomposition.in_overlap(self.forest.positions())
        plan = compute_plan(self.cfg.theta, self.cfg.tau, self.state.decomposition, int(in_ov.sum()))
        return expand_window(self.forest, plan, self.state, grid, self.cfg, rng, self.window_index, seeded)


class FixedWindowDetector(_DetectorBase):
    name = "baseline"

    def _window(self, scan) -> Rect:
        return fixed_window(scan.pose, self.cfg.half_extent)

    def _run(self, scan, grid, rng):
        _, seeded = self._prepare(scan, grid)
        return baseline_expand(
            self.forest, self.state.current, grid, self.cfg, rng,
            self.window_index, scan.pose, self.state, seeded,
        )


DETECTORS = {"adaptive": AdaptiveDetector, "baseline": FixedWindowDetector}


def make_detector(name: str, cfg: Optional[DetectorConfig] = None):
    try:
        cls = DETECTORS[name]
    except KeyError:
        raise ValueError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None
    return cls(cfg=cfg or DetectorConfig())
