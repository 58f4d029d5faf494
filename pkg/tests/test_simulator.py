import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from worg.demand import DemandCurve, TimeGrid, growth_demand, growth_upper_bound
from worg.dtw import distance
from worg.simulator import FleetConfig, active_initial_fleet, run_sim, simulate

CFG = FleetConfig()
GRID = TimeGrid(2016, 20)
schedules = st.lists(st.integers(0, 10), min_size=20, max_size=20)


def test_active_initial_fleet():
    assert active_initial_fleet(CFG, 0) == 100
    assert active_initial_fleet(CFG, 40) == 0
    assert active_initial_fleet(CFG, 20) == 50
    assert active_initial_fleet(CFG, 60) == 0
    retirements = -np.diff(active_initial_fleet(CFG, np.arange(41)))
    assert set(retirements.tolist()) == {2, 3}


def test_zero_schedule_start():
    g = simulate(CFG, GRID, np.zeros(20))
    assert g.values[0] == pytest.approx(100 * 18 / 19)
    assert g.values[0] == pytest.approx(94.74, abs=0.005)


def test_empty_fleet_on_long_grid():
    g = simulate(CFG, TimeGrid(2016, 45), np.zeros(45))
    assert np.all(g.values[40:] == 0)


def test_first_year_deployment_counts():
    theta = np.zeros(20, dtype=int)
    theta[0] = 2
    g = simulate(CFG, GRID, theta)
    assert g.values[0] == pytest.approx(102 * 18 / 19)
    assert g.values[0] == pytest.approx(96.63, abs=0.005)


def test_lifetime_window():
    cfg = FleetConfig(initial_count=0, new_lifetime_years=3)
    theta = np.zeros(10, dtype=int)
    theta[2] = 1
    g = simulate(cfg, TimeGrid(2016, 10), theta)
    assert (g.values > 0).tolist() == [False, False, True, True, True] + [False] * 5


def test_run_sim_self_distance():
    g0 = simulate(CFG, GRID, np.zeros(20))
    res = run_sim(CFG, GRID, np.zeros(20), DemandCurve(GRID, g0.values))
    assert res.dist == 0


def test_bound_runs_are_off_demand():
    f = growth_demand(0.01, 90, GRID)
    low = run_sim(CFG, GRID, np.zeros(20), f)
    assert low.dist > 0
    assert low.production.values[-1] < f.values[-1]
    high = run_sim(CFG, GRID, growth_upper_bound(0.01, 10, GRID), f)
    assert high.dist > 0
    assert np.all(high.production.values[5:] >= f.values[5:])
    assert high.dist == distance(f.values, high.production.values)


@settings(max_examples=60)
@given(schedules, schedules)
def test_monotone_and_additive(a, b):
    a, b = np.array(a), np.array(b)
    hi = np.maximum(a, b)
    ga, ghi = simulate(CFG, GRID, a).values, simulate(CFG, GRID, hi).values
    assert np.all(ghi >= ga)
    g0 = simulate(CFG, GRID, np.zeros(20)).values
    gab = simulate(CFG, GRID, a + b).values
    np.testing.assert_allclose(gab, ga + simulate(CFG, GRID, b).values - g0, atol=1e-9)


def test_deterministic():
    theta = np.arange(20) % 4
    assert simulate(CFG, GRID, theta).values.tobytes() == simulate(CFG, GRID, theta).values.tobytes()


def test_rejects_bad_schedule():
    with pytest.raises(ValueError):
        simulate(CFG, GRID, np.zeros(19))
    with pytest.raises(ValueError):
        simulate(CFG, GRID, -np.ones(20))
