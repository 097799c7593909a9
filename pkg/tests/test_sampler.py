import numpy as np
import pytest
from hypothesis import given, strategies as st

from rrtexplore.geometry import Rect, decompose
from rrtexplore.sampler import PlanSaturated, Region, SamplingPlan, compute_plan, draw_region, window_budget


def _decomp(s_o, s_n):
    # current window [0, s_o + s_n] x [0, 1], previous covers the first s_o
    cur = Rect(0, 0, s_o + s_n, 1)
    return decompose(cur, Rect(-1, 0, s_o, 1) if s_o > 0 else None)


def test_plan_balanced():
    p = compute_plan(1.0, 1000, _decomp(30, 20), 10)
    assert (p.n_eo, p.n_en, p.eta_n, p.eta_o) == (20, 20, 0.5, 0.5)


def test_plan_first_window():
    p = compute_plan(0.5, 1000, _decomp(0, 100), 0)
    assert p.n_en == 50 and p.eta_n == 1.0


def test_plan_overlap_dense_is_clamped():
    p = compute_plan(1.0, 1000, _decomp(30, 20), 45)
    assert p.n_eo == 0 and p.eta_n == 1.0


def test_plan_saturated():
    p = compute_plan(1.0, 10, _decomp(30, 0), 45)
    assert p.saturated
    with pytest.raises(PlanSaturated):
        draw_region(p, np.random.default_rng(0))


def test_plan_rejects_bad_inputs():
    d = _decomp(1, 1)
    with pytest.raises(ValueError):
        compute_plan(0.0, 10, d, 0)
    with pytest.raises(ValueError):
        compute_plan(1.0, 0, d, 0)
    with pytest.raises(ValueError):
        compute_plan(1.0, 10, d, -1)


def test_draw_region_degenerate():
    rng = np.random.default_rng(0)
    p = compute_plan(1.0, 100, _decomp(0, 10), 0)
    assert all(draw_region(p, rng) is Region.NON_OVERLAP for _ in range(1000))


def test_draw_region_half():
    rng = np.random.default_rng(3)
    p = compute_plan(1.0, 1000, _decomp(30, 20), 10)
    n = 100_000
    non = sum(draw_region(p, rng) is Region.NON_OVERLAP for _ in range(n))
    assert non / n == pytest.approx(0.5, abs=0.01)


def test_window_budget():
    assert window_budget(1.0, 300, 100) == 100
    assert window_budget(1.0, 50, 100) == 50
    assert window_budget(1.0, 50, 0) == 0
    assert window_budget(0.1, 50, 30) == 3
    assert window_budget(0.25, 1000, 400) == 100
    with pytest.raises(ValueError):
        window_budget(1.0, 50, -1)


pos = st.floats(0, 1e4, allow_nan=False)


@given(st.floats(1e-3, 10), st.integers(1, 10**6), pos, pos, st.integers(0, 10**5))
def test_plan_invariants(theta, tau, s_o, s_n, n_o):
    d = _decomp(s_o, s_n)
    p = compute_plan(theta, tau, d, n_o)
    assert p.n_eo == max(0.0, theta * d.s_o - n_o)
    assert p.n_en == theta * d.s_n
    assert p.n_eo >= 0 and p.n_en >= 0
    if p.n_eo + p.n_en > 0:
        assert p.eta_n == p.n_en / (p.n_eo + p.n_en)
        assert p.eta_o + p.eta_n == pytest.approx(1.0)
        assert 0 <= p.eta_n <= 1
    else:
        assert p.saturated
