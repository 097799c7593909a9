import math

import pytest
from hypothesis import given, strategies as st

from rrtexplore import scenarios
from rrtexplore.bench import (
    SUMMARY_HEADER, WINDOW_HEADER, SummaryRow, read_series_csv, read_summary_csv, read_windows_csv,
    seed_list, series_points, summarize, sweep, write_series_csv, write_summary_csv, write_windows_csv,
)
from rrtexplore.metrics import WindowMetrics
from rrtexplore.occupancy import ParseError
from rrtexplore.sim import RunConfig

FAST = RunConfig(max_windows=8, timing=False)

finite = st.floats(allow_nan=False, allow_infinity=False)
metrics = st.builds(
    WindowMetrics,
    window_index=st.integers(0, 10**6), detector=st.sampled_from(["adaptive", "baseline"]),
    seed=st.integers(-10**9, 10**9), attempts=st.integers(0, 10**7), successes=st.integers(0, 10**7),
    p=st.one_of(finite, st.just(math.inf)), duration_s=finite, s_total=finite, s_o=finite, s_n=finite,
    n_frontiers=st.integers(0, 10**5),
)


@given(st.lists(metrics, max_size=20))
def test_windows_csv_round_trip(tmp_path_factory, rows):
    p = tmp_path_factory.mktemp("csv") / "w.csv"
    write_windows_csv(p, rows)
    assert read_windows_csv(p) == rows


@given(st.lists(st.builds(SummaryRow, detector=st.sampled_from(["adaptive", "baseline"]),
                          scenario=st.sampled_from(["corridors", "forest"]), epsilon=finite, V=finite,
                          L=finite, mean_attempts=finite, mean_successes=finite, mean_duration_s=finite),
                max_size=6))
def test_summary_csv_round_trip(tmp_path_factory, rows):
    p = tmp_path_factory.mktemp("csv") / "s.csv"
    write_summary_csv(p, rows)
    assert read_summary_csv(p) == rows


def test_headers_bit_exact(tmp_path):
    write_windows_csv(tmp_path / "w.csv", [])
    write_summary_csv(tmp_path / "s.csv", [])
    assert (tmp_path / "w.csv").read_text() == (
        "window_index,detector,seed,attempts,successes,p,duration_s,s_total,s_o,s_n,n_frontiers\n")
    assert (tmp_path / "s.csv").read_text() == (
        "detector,scenario,epsilon,V,L,mean_attempts,mean_successes,mean_duration_s\n")
    assert ",".join(WINDOW_HEADER) + "\n" == (tmp_path / "w.csv").read_text()
    assert ",".join(SUMMARY_HEADER) + "\n" == (tmp_path / "s.csv").read_text()


def test_wrong_header_rejected(tmp_path):
    (tmp_path / "w.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_windows_csv(tmp_path / "w.csv")


def test_sweep_cardinality_and_summary(tmp_path):
    res = sweep([("corridors", scenarios.load("corridors"))], ["adaptive", "baseline"], seed_list(10),
                out_dir=tmp_path, base=FAST)
    assert len(res.results) == 20 and len(res.rows) == 2
    assert [(r.scenario, r.detector) for r in res.rows] == [("corridors", "adaptive"), ("corridors", "baseline")]
    runs = res.runs("corridors", "adaptive")
    row = res.rows[0]
    assert row.epsilon == pytest.approx(sum(r.explored_volume / r.sim_time for r in runs) / 10)
    assert row.V == pytest.approx(sum(r.explored_volume for r in runs) / 10)
    assert row.L == pytest.approx(sum(r.distance for r in runs) / 10)
    per_run = [sum(w.attempts for w in r.window_metrics) / len(r.window_metrics) for r in runs]
    assert row.mean_attempts == pytest.approx(sum(per_run) / 10)
    # CSVs hold exactly what was computed
    windows = read_windows_csv(tmp_path / "corridors" / "windows.csv")
    assert windows == [m for k in sorted(res.results) for m in res.results[k].window_metrics]
    assert read_summary_csv(tmp_path / "summary.csv") == res.rows
    series = read_series_csv(tmp_path / "corridors" / "series.csv")
    assert series == [p for k in sorted(res.results) for p in series_points(res.results[k])]


def test_sweep_is_deterministic_and_order_free(tmp_path):
    maps = [scenarios.bundled_path("corridors"), scenarios.bundled_path("forest")]
    sweep(maps, ["adaptive", "baseline"], [3, 4], out_dir=tmp_path / "a", base=FAST)
    sweep(maps, ["baseline", "adaptive"], [4, 3], out_dir=tmp_path / "b", base=FAST, workers=2)
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.csv"))
    assert len(files) == 5
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_sweep_preconditions(tmp_path):
    with pytest.raises(ValueError):
        sweep([("c", scenarios.load("corridors"))], ["adaptive"], [1, 1], base=FAST)
    with pytest.raises(ValueError):
        sweep([("c", scenarios.load("corridors"))], ["rrt*"], [1], base=FAST)
    bad = tmp_path / "bad.map"
    bad.write_text("3 3 1.0\n...\n..\n...\n")
    with pytest.raises(ParseError):
        sweep([bad], ["adaptive"], [1], base=FAST)


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        summarize("x", "adaptive", [])


def test_seed_list():
    assert seed_list(3, 10) == [10, 11, 12]
