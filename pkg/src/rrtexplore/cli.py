"""Command line entry point: ``explore run | bench | plot``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench, kernels, plots
from .occupancy import ParseError, load_ground_truth
from .scenarios import bundled_scenario_dir
from .sim import InvalidStart, RunConfig, parse_config, run


def _on_off(text: str) -> bool:
    low = text.lower()
    if low in ("on", "true", "1", "yes"):
        return True
    if low in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _base_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = parse_config(Path(args.config).read_text())
    if args.timing is not None:
        cfg = cfg.replace(timing=args.timing)
    if getattr(args, "max_windows", None) is not None:
        cfg = cfg.replace(max_windows=args.max_windows)
    return cfg


def _print_rows(rows) -> None:
    print(f"{'scenario':<12}{'detector':<10}{'epsilon':>9}{'V':>10}{'L':>9}{'attempts':>10}{'successes':>10}{'dur_ms':>9}")
    for r in rows:
        print(f"{r.scenario:<12}{r.detector:<10}{r.epsilon:9.3f}{r.V:10.1f}{r.L:9.1f}"
              f"{r.mean_attempts:10.1f}{r.mean_successes:10.1f}{r.mean_duration_s * 1e3:9.3f}")


def cmd_run(args) -> int:
    cfg = _base_config(args)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.detector:
        cfg = cfg.replace(detector=args.detector)
    map_path = args.map or cfg.map
    if not map_path:
        print("explore run: no map given (--map or map= in the config)", file=sys.stderr)
        return 2
    truth = load_ground_truth(Path(map_path).read_bytes())
    result = run(truth, cfg.replace(map=str(map_path)))
    row = bench.write_run(args.out, Path(map_path).stem, [result])
    print(f"{result.termination} after {result.sim_time:.1f} s, {len(result.window_metrics)} windows")
    _print_rows([row])
    return 0


def cmd_bench(args) -> int:
    cfg = _base_config(args)
    files = bench.scenario_files(args.scenarios or bundled_scenario_dir())
    detectors = [d.strip() for d in args.detectors.split(",") if d.strip()]
    seeds = bench.seed_list(args.seeds, args.master_seed)
    res = bench.sweep(files, detectors, seeds, out_dir=args.out, base=cfg, workers=args.workers)
    _print_rows(res.rows)
    return 0


def cmd_plot(args) -> int:
    for p in plots.plot_dir(args.input):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="explore", description="2D exploration with sliding-window RRT frontier detection")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="single exploration run")
    r.add_argument("--map", help="ground-truth map file")
    r.add_argument("--config", help="key=value config file")
    r.add_argument("--seed", type=int)
    r.add_argument("--detector", choices=bench.DETECTORS)
    r.add_argument("--out", required=True)
    r.add_argument("--timing", type=_on_off, default=None, help="record detector wall time (on|off)")
    r.add_argument("--max-windows", type=int)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="multi-seed sweep over scenario maps")
    b.add_argument("--scenarios", help="directory of .map files (default: bundled scenarios)")
    b.add_argument("--detectors", default="adaptive,baseline")
    b.add_argument("--seeds", type=int, default=10, help="number of seeds")
    b.add_argument("--master-seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.add_argument("--config", help="key=value config file applied to every run")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--timing", type=_on_off, default=None,
                   help="record detector wall time (on|off); off makes every CSV byte-reproducible")
    b.add_argument("--max-windows", type=int)
    b.set_defaults(func=cmd_bench)

    p = sub.add_parser("plot", help="SVG charts from run or bench output")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except (ParseError, InvalidStart, FileNotFoundError, ValueError) as e:
        print(f"explore {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
