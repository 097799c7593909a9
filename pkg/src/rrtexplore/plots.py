"""SVG charts for a run or a sweep.

Four charts per scenario: explored area and distance against simulated time,
attempts and detector wall time per window. Each detector is one series,
averaged over its seeds. Output bytes depend only on the input data.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from matplotlib import rc_context
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .bench import SeriesPoint, read_series_csv, read_windows_csv, series_points
from .metrics import WindowMetrics

CHARTS = ("explored", "distance", "attempts", "duration")
_RC = {"svg.hashsalt": "rrtexplore", "svg.fonttype": "path", "path.simplify": False}
_COLORS = {"adaptive": "tab:blue", "baseline": "tab:orange"}


@dataclass
class ScenarioData:
    windows: List[WindowMetrics] = field(default_factory=list)
    series: List[SeriesPoint] = field(default_factory=list)

    @classmethod
    def from_results(cls, results) -> "ScenarioData":
        d = cls()
        for r in results:
            d.windows.extend(r.window_metrics)
            d.series.extend(series_points(r))
        return d

    @property
    def detectors(self) -> List[str]:
        return sorted({w.detector for w in self.windows} | {p.detector for p in self.series})


def _mean_ragged(runs: List[np.ndarray], pad_last: bool) -> np.ndarray:
    """Mean of unequal-length arrays.

    With ``pad_last`` a finished run holds its final value, which suits
    cumulative series; otherwise each index averages the runs that reach it.
    """
    n = max(len(r) for r in runs)
    acc = np.zeros(n)
    cnt = np.zeros(n)
    for r in runs:
        if len(r) == 0:
            continue
        if pad_last:
            r = np.concatenate([r, np.full(n - len(r), r[-1])])
        acc[: len(r)] += r
        cnt[: len(r)] += 1
    return acc / np.maximum(cnt, 1)


def _time_series(points: Sequence[SeriesPoint], det: str, attr: str):
    by_seed: Dict[int, List[SeriesPoint]] = defaultdict(list)
    for p in points:
        if p.detector == det:
            by_seed[p.seed].append(p)
    if not by_seed:
        return None
    runs = [sorted(v, key=lambda p: p.t) for _, v in sorted(by_seed.items())]
    longest = max(runs, key=len)
    t = np.array([p.t for p in longest])
    y = _mean_ragged([np.array([getattr(p, attr) for p in r]) for r in runs], pad_last=True)
    return t, y


def _window_series(windows: Sequence[WindowMetrics], det: str, attr: str):
    by_seed: Dict[int, List[WindowMetrics]] = defaultdict(list)
    for w in windows:
        if w.detector == det:
            by_seed[w.seed].append(w)
    if not by_seed:
        return None
    runs = [np.array([getattr(w, attr) for w in sorted(v, key=lambda w: w.window_index)], dtype=float)
            for _, v in sorted(by_seed.items())]
    y = _mean_ragged(runs, pad_last=False)
    return np.arange(len(y)), y


def _chart(title, xlabel, ylabel, lines, path: Path) -> None:
    with rc_context(_RC):
        fig = Figure(figsize=(6.4, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        for det, (x, y) in lines:
            ax.plot(x, y, label=det, color=_COLORS.get(det), linewidth=1.2, gid=f"series-{det}")
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        if lines:
            ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})


def plot_scenario(name: str, data: ScenarioData, out_dir) -> List[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    specs = {
        "explored": ("time [s]", "explored area [m^2]", lambda d: _time_series(data.series, d, "explored_m2")),
        "distance": ("time [s]", "distance [m]", lambda d: _time_series(data.series, d, "distance_m")),
        "attempts": ("window", "sampling attempts", lambda d: _window_series(data.windows, d, "attempts")),
        "duration": ("window", "detector time [s]", lambda d: _window_series(data.windows, d, "duration_s")),
    }
    written = []
    for chart in CHARTS:
        xl, yl, get = specs[chart]
        lines = [(d, s) for d in data.detectors if (s := get(d)) is not None]
        p = out / f"{chart}.svg"
        _chart(f"{name}: {chart}", xl, yl, lines, p)
        written.append(p)
    return written


def emit_plots(results: Mapping[str, object], out_dir) -> List[Path]:
    """``results`` maps scenario name to RunResults or a ScenarioData.

    Charts go to ``out_dir/<scenario>/``.
    """
    if not results:
        raise ValueError("emit_plots needs at least one result")
    written = []
    for name in sorted(results):
        data = results[name]
        if not isinstance(data, ScenarioData):
            data = ScenarioData.from_results(data)
        if not data.windows and not data.series:
            raise ValueError(f"scenario {name!r} has no results")
        written += plot_scenario(name, data, Path(out_dir) / name)
    return written


def load_dir(path) -> Dict[str, Tuple[Path, ScenarioData]]:
    """CSV data under ``path``: a run directory or a sweep directory."""
    root = Path(path)
    found = {}
    dirs = [root] if (root / "windows.csv").exists() else sorted(p for p in root.iterdir() if (p / "windows.csv").exists())
    for d in dirs:
        series = read_series_csv(d / "series.csv") if (d / "series.csv").exists() else []
        found[d.name] = (d, ScenarioData(read_windows_csv(d / "windows.csv"), series))
    return found


def plot_dir(path) -> List[Path]:
    """Write the charts next to the CSVs they come from."""
    found = load_dir(path)
    if not found:
        raise ValueError(f"no windows.csv under {path}")
    written = []
    for name, (d, data) in sorted(found.items()):
        written += plot_scenario(name, data, d)
    return written
