import numpy as np
import pytest

from rrtexplore import scenarios
from rrtexplore.occupancy import CellState, dump_ground_truth
from rrtexplore.sim import default_start

from oracles import reachable_free


@pytest.mark.parametrize("name", sorted(scenarios.BUILDERS))
def test_bundled_map_matches_generator(name):
    assert scenarios.bundled_path(name).read_text() == dump_ground_truth(scenarios.BUILDERS[name]())


@pytest.mark.parametrize("name", sorted(scenarios.BUILDERS))
def test_map_size_and_connectivity(name):
    g = scenarios.load(name)
    assert g.resolution == 0.25
    assert g.width * g.resolution <= 100 and g.height * g.resolution <= 100
    # the border is closed so the robot cannot leave the map
    assert (g.cells[0] == CellState.OCCUPIED).all() and (g.cells[-1] == CellState.OCCUPIED).all()
    assert (g.cells[:, 0] == CellState.OCCUPIED).all() and (g.cells[:, -1] == CellState.OCCUPIED).all()
    start = g.to_cell(default_start(g))
    reach = reachable_free(g.cells, start)
    assert reach.sum() == (g.cells == CellState.FREE).sum()


def test_bench_set_is_bundled():
    names = sorted(p.stem for p in scenarios.bundled_scenario_dir().glob("*.map"))
    assert names == sorted(scenarios.BENCH_SCENARIOS)


def test_write_all(tmp_path):
    scenarios.write_all(tmp_path)
    assert (tmp_path / "scenarios" / "garage.map").read_bytes() == scenarios.bundled_path("garage").read_bytes()
    assert (tmp_path / "extra" / "maze50.map").exists()
