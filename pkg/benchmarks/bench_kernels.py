"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Each kernel is timed on the same inputs under both backends; the end-to-end
option also times a short exploration run with each backend in a subprocess.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from rrtexplore import kernels, scenarios
from rrtexplore.lidar import beam_angles
from rrtexplore.sim import default_start


def workloads(mod, truth, live, pose, rng):
    res = truth.resolution
    ang = beam_angles(360)
    cos, sin = np.cos(ang), np.sin(ang)
    gx, gy = pose[0] / res, pose[1] / res
    segs = rng.uniform(0, min(truth.width, truth.height), size=(2000, 4))
    pts = rng.uniform(0, 60, size=(2000, 2))
    q = rng.uniform(0, 60, size=(2000, 2))
    sc, sr = truth.to_cell(pose)
    free = np.argwhere(truth.cells == 1)
    far = free[np.argmax(np.hypot(free[:, 0] - sr, free[:, 1] - sc))]

    def cast():
        mod.cast_scan(truth.cells, pose[0], pose[1], 0.0, 0.0, res, cos, sin, 15.0)

    def segment():
        for x0, y0, x1, y1 in segs:
            mod.segment_free(live.cells, x0, y0, x1, y1)

    def gain():
        for dx in range(-10, 11, 2):
            mod.gain_count(live.cells, gx + dx, gy, 20.0)

    def kd():
        n = len(pts)
        xs, ys = pts[:, 0].copy(), pts[:, 1].copy()
        left, right = np.empty(n, np.int64), np.empty(n, np.int64)
        for k in range(n):
            mod.kd_insert(xs, ys, left, right, k)
        for a, b in q:
            mod.kd_nearest(xs, ys, left, right, n, a, b)

    def astar():
        mod.astar(truth.cells, sc, sr, int(far[1]), int(far[0]))

    def frontier():
        mod.nearest_frontier_cell(live.cells, sc, sr, 20.0, 100.0)

    return {"cast_scan": cast, "segment_free x2000": segment, "gain_count x11": gain,
            "kd build+query 2000": kd, "astar across map": astar, "nearest_frontier_cell": frontier}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--map", default="corridors")
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()

    found = kernels.backends()
    if "compiled" not in found:
        print("compiled extension not available; only the Python backend can be timed")
    truth = scenarios.load(args.map)
    pose = default_start(truth)
    live = truth.copy()
    live.cells[:, truth.width // 2:] = 0  # half the map Unknown

    rows = {}
    for name, mod in found.items():
        for label, fn in workloads(mod, truth, live, pose, np.random.default_rng(0)).items():
            n = 1 if name == "python" else 5
            best = min(timeit.repeat(fn, number=n, repeat=args.repeat)) / n
            rows.setdefault(label, {})[name] = best

    print(f"{'kernel':<26}{'python [ms]':>14}{'compiled [ms]':>15}{'speedup':>10}")
    for label, t in rows.items():
        py, cc = t.get("python"), t.get("compiled")
        sp = f"{py / cc:9.1f}x" if py and cc else "        -"
        print(f"{label:<26}{py * 1e3:14.2f}{(cc or float('nan')) * 1e3:15.3f}{sp:>10}")

    if args.end_to_end:
        code = ("import time;from rrtexplore import scenarios,sim,kernels;"
                f"g=scenarios.load({args.map!r});t=time.perf_counter();"
                "sim.run(g,sim.RunConfig(seed=0,max_windows=40));"
                "print(kernels.BACKEND, round(time.perf_counter()-t,3))")
        for pure in ("", "1"):
            env = dict(os.environ, RRTEXPLORE_PURE_PYTHON=pure)
            out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
            print("end-to-end 40 windows:", out.stdout.strip() or out.stderr.strip()[-200:], "s")


if __name__ == "__main__":
    main()
