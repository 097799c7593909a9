import pytest

from rrtexplore import scenarios
from rrtexplore.bench import sweep
from rrtexplore.plots import CHARTS, emit_plots, plot_dir
from rrtexplore.sim import RunConfig, run

FAST = RunConfig(max_windows=12, timing=False)


@pytest.fixture(scope="module")
def corridor_runs():
    g = scenarios.load("corridors")
    return [run(g, FAST.replace(detector=d, seed=s)) for d in ("adaptive", "baseline") for s in (0, 1)]


def test_empty_rejected(tmp_path):
    with pytest.raises(ValueError):
        emit_plots({}, tmp_path)
    with pytest.raises(ValueError):
        emit_plots({"x": []}, tmp_path)


def test_single_run_single_series(tmp_path, corridor_runs):
    out = emit_plots({"corridors": corridor_runs[:1]}, tmp_path)
    assert [p.name for p in out] == [f"{c}.svg" for c in CHARTS]
    for p in out:
        text = p.read_text()
        assert 'id="series-adaptive"' in text and 'id="series-baseline"' not in text


def test_two_detectors_two_series_with_legend(tmp_path, corridor_runs):
    for p in emit_plots({"corridors": corridor_runs}, tmp_path):
        text = p.read_text()
        assert 'id="series-adaptive"' in text and 'id="series-baseline"' in text
        assert 'id="legend_1"' in text


def test_rendering_is_deterministic(tmp_path, corridor_runs):
    a = emit_plots({"corridors": corridor_runs}, tmp_path / "a")
    b = emit_plots({"corridors": corridor_runs}, tmp_path / "b")
    for x, y in zip(a, b):
        assert x.read_bytes() == y.read_bytes()
        assert b"<dc:date>" not in x.read_bytes()


def test_plot_dir_from_csv(tmp_path):
    sweep([scenarios.bundled_path("corridors")], ["adaptive", "baseline"], [0], out_dir=tmp_path, base=FAST)
    written = plot_dir(tmp_path)
    assert sorted(p.name for p in written) == sorted(f"{c}.svg" for c in CHARTS)
    assert all(p.parent == tmp_path / "corridors" for p in written)


def test_plot_dir_without_csv(tmp_path):
    with pytest.raises(ValueError):
        plot_dir(tmp_path)
