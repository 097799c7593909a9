import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from rrtexplore.lidar import LidarScan, scan
from rrtexplore.occupancy import (
    CellState, OccupancyGrid, OutOfBounds, ParseError, PoseOutOfBounds, ViewpointNotFree,
    dump_ground_truth, exploration_gain, integrate_scan, load_ground_truth, segment_is_traversable,
)

from conftest import make_grid
from oracles import gain_oracle, near_grid_corner, segment_free_oracle

F, O, U = CellState.FREE, CellState.OCCUPIED, CellState.UNKNOWN


def test_load_uniform():
    g = load_ground_truth(b"3 3 0.5\n...\n...\n...\n")
    assert g.width == g.height == 3 and g.resolution == 0.5
    assert (g.cells == F).all()


def test_load_y_flip():
    g = load_ground_truth("3 3 1.0\n#..\n...\n...\n")
    # first text row is the north edge
    assert g.cells[2, 0] == O
    assert g.state_at((0.5, 2.5)) == O
    assert g.state_at((0.5, 0.5)) == F


def test_load_single_obstacle():
    g = load_ground_truth("3 3 1.0\n...\n.#.\n...\n")
    assert g.cells[1, 1] == O and (g.cells == O).sum() == 1


@pytest.mark.parametrize("text", [
    "3 3 1.0\n...\n..\n...\n",
    "3 3 1.0\n...\n...\n",
    "3 3\n...\n...\n...\n",
    "3 3 x\n...\n...\n...\n",
    "3 3 1.0\n...\n.x.\n...\n",
    "0 3 1.0\n",
    "",
    b"2 1 1.0\n\xff.\n",
])
def test_load_errors(text):
    with pytest.raises(ParseError):
        load_ground_truth(text)


def test_dump_round_trip():
    rng = np.random.default_rng(0)
    cells = rng.choice([F, O], size=(7, 11)).astype(np.uint8)
    g = OccupancyGrid(cells, 0.25)
    back = load_ground_truth(dump_ground_truth(g))
    assert back.resolution == 0.25 and np.array_equal(back.cells, cells)


def _beam(pose, angle, rng_, hit):
    return LidarScan(pose, np.array([angle]), np.array([rng_]), np.array([hit]), rng_)


def test_integrate_free_beam():
    live = make_grid(10, 10, 0.5, U)
    integrate_scan(live, _beam((2.1, 2.25), 0.0, 1.8, False))
    free = np.argwhere(live.cells == F)
    assert sorted(map(tuple, free)) == [(4, 4), (4, 5), (4, 6), (4, 7)]
    assert (live.cells == O).sum() == 0


def test_integrate_wall_hit():
    truth = make_grid(20, 5, 0.5)
    truth.cells[:, 8] = O  # wall at x in [4, 4.5)
    live = OccupancyGrid.unknown_like(truth)
    pose = (3.0 + 0.1, 1.25)
    s = scan(truth, pose, 4, 10.0)
    assert s.ranges[0] == pytest.approx(0.9)
    integrate_scan(live, s)
    assert live.cells[2, 8] == O
    assert (live.cells[2, 6:8] == F).all()
    assert live.cells[2, 9] == U


def test_integrate_zero_beams():
    live = make_grid(4, 4, 1.0, U)
    before = live.cells.copy()
    integrate_scan(live, LidarScan((1.5, 1.5), np.zeros(0), np.zeros(0), np.zeros(0, bool), 5.0))
    assert np.array_equal(live.cells, before)


def test_integrate_pose_out_of_bounds():
    live = make_grid(4, 4, 1.0, U)
    with pytest.raises(PoseOutOfBounds):
        integrate_scan(live, _beam((10.0, 1.0), 0.0, 1.0, False))


def _random_world(seed, w=40, h=30, boxes=12):
    rng = np.random.default_rng(seed)
    g = make_grid(w, h, 0.25)
    for _ in range(boxes):
        c, r = rng.integers(0, w), rng.integers(0, h)
        g.cells[r: r + rng.integers(1, 5), c: c + rng.integers(1, 5)] = O
    return g


@given(st.integers(0, 10**6), st.floats(0.3, 9.7), st.floats(0.3, 7.2))
def test_integrate_idempotent_and_bounded(seed, x, y):
    truth = _random_world(seed)
    assume(truth.is_free((x, y)))
    s = scan(truth, (x, y), 72, 4.0)
    live = OccupancyGrid.unknown_like(truth)
    integrate_scan(live, s)
    once = live.cells.copy()
    integrate_scan(live, s)
    assert np.array_equal(live.cells, once)
    # nothing beyond the return distance is touched
    known = np.argwhere(once != U)
    centres = (known[:, ::-1] + 0.5) * truth.resolution
    assert (np.hypot(centres[:, 0] - x, centres[:, 1] - y) <= 4.0 + truth.resolution * 1.5).all()
    # observed cells agree with the truth
    assert np.array_equal(once[once != U], truth.cells[once != U])


def test_traversable_basic():
    g = make_grid(10, 10, 1.0)
    assert segment_is_traversable(g, (0.5, 0.5), (9.5, 8.7))
    g.cells[5, 5] = O
    assert not segment_is_traversable(g, (0.5, 5.5), (9.5, 5.5))
    g2 = make_grid(10, 10, 1.0)
    g2.cells[:, 7:] = U
    assert not segment_is_traversable(g2, (0.5, 0.5), (8.5, 0.5))


def test_traversable_self():
    g = make_grid(3, 3, 1.0)
    g.cells[1, 1] = O
    assert segment_is_traversable(g, (0.5, 0.5), (0.5, 0.5))
    assert not segment_is_traversable(g, (1.5, 1.5), (1.5, 1.5))


def test_traversable_diagonal_corner_is_blocked():
    # two Occupied cells touching at a corner; a segment through that corner must not slip between them
    g = make_grid(4, 4, 1.0)
    g.cells[1, 2] = O
    g.cells[2, 1] = O
    assert not segment_is_traversable(g, (0.5, 0.5), (3.5, 3.5))


def test_traversable_along_grid_line_checks_both_sides():
    g = make_grid(6, 4, 1.0)
    g.cells[1, 3] = O
    assert not segment_is_traversable(g, (0.5, 2.0), (5.5, 2.0))
    assert segment_is_traversable(g, (0.5, 3.0), (5.5, 3.0))


def test_traversable_out_of_bounds():
    g = make_grid(3, 3, 1.0)
    with pytest.raises(OutOfBounds):
        segment_is_traversable(g, (0.5, 0.5), (5.0, 0.5))


coord = st.floats(0.01, 11.99, allow_nan=False)


@given(st.integers(0, 10**6), coord, coord, coord, coord)
def test_traversable_matches_oracle(seed, x0, y0, x1, y1):
    rng = np.random.default_rng(seed)
    cells = rng.choice([F, F, F, O, U], size=(12, 12)).astype(np.uint8)
    assume(not near_grid_corner(x0, y0, x1, y1))
    g = OccupancyGrid(cells, 1.0)
    assert segment_is_traversable(g, (x0, y0), (x1, y1)) == segment_free_oracle(cells, x0, y0, x1, y1)


def test_gain_zero_without_unknown():
    g = make_grid(10, 10, 0.5)
    g.cells[0, :] = O
    assert exploration_gain(g, (2.3, 2.3), 2.0) == 0.0


def test_gain_open_unknown():
    g = make_grid(10, 10, 0.5, U)
    g.cells[5, 5] = F
    vp = (2.75, 2.75)
    centres = (np.argwhere(np.ones((10, 10))) + 0.5) * 0.5
    inside = (np.hypot(centres[:, 0] - 2.75, centres[:, 1] - 2.75) <= 2.0).sum() - 1
    assert exploration_gain(g, vp, 2.0) == pytest.approx(inside * 0.25)


def test_gain_wall_hides_unknown():
    g = make_grid(20, 5, 0.5)
    g.cells[:, 10] = O
    g.cells[:, 11:] = U
    assert exploration_gain(g, (2.0, 1.25), 5.0) == 0.0
    g.cells[:, 10] = F
    assert exploration_gain(g, (2.0, 1.25), 5.0) > 0


def test_gain_requires_free_viewpoint():
    g = make_grid(4, 4, 1.0, U)
    with pytest.raises(ViewpointNotFree):
        exploration_gain(g, (1.5, 1.5), 2.0)


@given(st.integers(0, 10**6), st.floats(0.05, 11.95), st.floats(0.05, 11.95), st.floats(0.5, 6.0))
def test_gain_matches_oracle(seed, x, y, radius):
    rng = np.random.default_rng(seed)
    cells = rng.choice([F, F, O, U, U], size=(12, 12)).astype(np.uint8)
    cells[int(y), int(x)] = F
    g = OccupancyGrid(cells, 1.0)
    # skip viewpoints whose sight lines would graze lattice points
    assume(not any(near_grid_corner(x, y, c + 0.5, r + 0.5, 1e-6)
                   for r in range(12) for c in range(12) if cells[r, c] == U))
    assert exploration_gain(g, (x, y), radius) == gain_oracle(cells, x, y, radius)


@given(st.integers(0, 10**6), st.floats(1.0, 9.0), st.floats(1.0, 6.5))
def test_gain_non_increasing_under_scans(seed, x, y):
    truth = _random_world(seed)
    assume(truth.is_free((x, y)))
    live = OccupancyGrid.unknown_like(truth)
    integrate_scan(live, scan(truth, (x, y), 36, 3.0))
    before = exploration_gain(live, (x, y), 3.0)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        p = (rng.uniform(0.5, 9.5), rng.uniform(0.5, 7.0))
        if truth.is_free(p):
            integrate_scan(live, scan(truth, p, 36, 3.0))
    assert exploration_gain(live, (x, y), 3.0) <= before
