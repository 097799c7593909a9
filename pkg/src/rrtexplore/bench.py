"""Multi-seed sweeps, per-window CSVs and summary rows.

Layout of a sweep output directory::

    out/summary.csv
    out/<scenario>/windows.csv
    out/<scenario>/series.csv

Floats are written with ``repr`` so parsing a CSV gives back the exact values.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .metrics import WindowMetrics
from .occupancy import OccupancyGrid, load_ground_truth
from .sim import RunConfig, RunResult, run

log = logging.getLogger(__name__)

WINDOW_HEADER = ["window_index", "detector", "seed", "attempts", "successes", "p",
                 "duration_s", "s_total", "s_o", "s_n", "n_frontiers"]
SUMMARY_HEADER = ["detector", "scenario", "epsilon", "V", "L",
                  "mean_attempts", "mean_successes", "mean_duration_s"]
SERIES_HEADER = ["detector", "seed", "t", "explored_m2", "distance_m"]

DETECTORS = ("adaptive", "baseline")


@dataclass(frozen=True)
class SummaryRow:
    detector: str
    scenario: str
    epsilon: float
    V: float
    L: float
    mean_attempts: float
    mean_successes: float
    mean_duration_s: float


@dataclass(frozen=True)
class SeriesPoint:
    detector: str
    seed: int
    t: float
    explored_m2: float
    distance_m: float


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def summarize(scenario: str, detector: str, results: Sequence[RunResult]) -> SummaryRow:
    """Means over runs. Per-window means are taken within a run first."""
    if not results:
        raise ValueError("no results to summarize")

    def per_run(attr):
        vals = []
        for r in results:
            wm = r.window_metrics
            vals.append(float(np.mean([getattr(w, attr) for w in wm])) if wm else 0.0)
        return float(np.mean(vals))

    return SummaryRow(
        detector=detector,
        scenario=scenario,
        epsilon=float(np.mean([r.efficiency for r in results])),
        V=float(np.mean([r.explored_volume for r in results])),
        L=float(np.mean([r.distance for r in results])),
        mean_attempts=per_run("attempts"),
        mean_successes=per_run("successes"),
        mean_duration_s=per_run("duration_s"),
    )


def series_points(result: RunResult) -> List[SeriesPoint]:
    out = []
    for (t, v), (_, d) in zip(result.explored_series, result.distance_series):
        out.append(SeriesPoint(result.detector, result.seed, float(t), float(v), float(d)))
    return out


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write(path: Path, header: List[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _read(path: Path, header: List[str], cls):
    types = {f.name: f.type for f in fields(cls)}
    conv = {"int": int, "float": float, "str": str}
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise ValueError(f"{path}: unexpected header {got}")
        for row in reader:
            out.append(cls(**{k: conv[types[k]](v) for k, v in zip(header, row)}))
    return out


def write_windows_csv(path, metrics: Iterable[WindowMetrics]) -> None:
    _write(Path(path), WINDOW_HEADER, ([getattr(m, k) for k in WINDOW_HEADER] for m in metrics))


def read_windows_csv(path) -> List[WindowMetrics]:
    return _read(Path(path), WINDOW_HEADER, WindowMetrics)


def write_summary_csv(path, rows: Iterable[SummaryRow]) -> None:
    _write(Path(path), SUMMARY_HEADER, ([getattr(r, k) for k in SUMMARY_HEADER] for r in rows))


def read_summary_csv(path) -> List[SummaryRow]:
    return _read(Path(path), SUMMARY_HEADER, SummaryRow)


def write_series_csv(path, points: Iterable[SeriesPoint]) -> None:
    _write(Path(path), SERIES_HEADER, ([getattr(p, k) for k in SERIES_HEADER] for p in points))


def read_series_csv(path) -> List[SeriesPoint]:
    return _read(Path(path), SERIES_HEADER, SeriesPoint)


def write_run(out_dir, scenario: str, results: Sequence[RunResult]) -> SummaryRow:
    """Windows, series and a one-row summary for a single run (``explore run``)."""
    out = Path(out_dir)
    write_windows_csv(out / "windows.csv", [m for r in results for m in r.window_metrics])
    write_series_csv(out / "series.csv", [p for r in results for p in series_points(r)])
    row = summarize(scenario, results[0].detector, results)
    write_summary_csv(out / "summary.csv", [row])
    return row


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

ScenarioArg = Union[str, Path, Tuple[str, OccupancyGrid]]


def load_scenarios(scenarios: Sequence[ScenarioArg]) -> List[Tuple[str, OccupancyGrid]]:
    """Accept map paths or ``(name, grid)`` pairs. Parse errors propagate."""
    out = []
    for s in scenarios:
        if isinstance(s, tuple):
            out.append((str(s[0]), s[1]))
        else:
            p = Path(s)
            out.append((p.stem, load_ground_truth(p.read_bytes())))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate scenario names: {names}")
    return out


def scenario_files(directory) -> List[Path]:
    files = sorted(Path(directory).glob("*.map"))
    if not files:
        raise FileNotFoundError(f"no .map files in {directory}")
    return files


def _job(args):
    scenario, grid, cfg = args
    r = run(grid, cfg)
    log.info("%s %s seed=%d: %s after %.1fs, %d windows",
             scenario, cfg.detector, cfg.seed, r.termination, r.sim_time, len(r.window_metrics))
    return r


@dataclass
class SweepResult:
    rows: List[SummaryRow]
    results: Dict[Tuple[str, str, int], RunResult]

    def runs(self, scenario: str, detector: str) -> List[RunResult]:
        return [r for (s, d, _), r in sorted(self.results.items()) if s == scenario and d == detector]


def sweep(
    scenarios: Sequence[ScenarioArg],
    detectors: Sequence[str],
    seeds: Sequence[int],
    out_dir=None,
    base: Optional[RunConfig] = None,
    workers: int = 1,
) -> SweepResult:
    """One run per (scenario, detector, seed); summary rows are means over seeds.

    Every detector sees the same seed list, so runs are paired. Aggregation
    walks the keys in sorted order whatever order the workers finish in.
    """
    seeds = [int(s) for s in seeds]
    if len(set(seeds)) != len(seeds):
        raise ValueError("seeds must be distinct")
    for d in detectors:
        if d not in DETECTORS:
            raise ValueError(f"unknown detector {d!r}")
    base = base or RunConfig()
    maps = load_scenarios(scenarios)

    keys, jobs = [], []
    for name, grid in maps:
        for d in detectors:
            for s in seeds:
                keys.append((name, d, s))
                jobs.append((name, grid, base.replace(detector=d, seed=s)))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_job, jobs))
    else:
        done = [_job(j) for j in jobs]
    results = dict(zip(keys, done))

    rows = []
    order = sorted(results)
    for name, _ in sorted(maps, key=lambda m: m[0]):
        for d in sorted(detectors):
            rs = [results[k] for k in order if k[0] == name and k[1] == d]
            rows.append(summarize(name, d, rs))

    if out_dir is not None:
        out = Path(out_dir)
        for name, _ in maps:
            mine = [results[k] for k in order if k[0] == name]
            write_windows_csv(out / name / "windows.csv", [m for r in mine for m in r.window_metrics])
            write_series_csv(out / name / "series.csv", [p for r in mine for p in series_points(r)])
        write_summary_csv(out / "summary.csv", rows)
    return SweepResult(rows, results)


def seed_list(count: int, master_seed: int = 0) -> List[int]:
    return [master_seed + i for i in range(count)]
