import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from worg.demand import (
    DemandCurve,
    DeploymentBounds,
    TimeGrid,
    growth_demand,
    growth_upper_bound,
    zero_lower_bound,
)

GRID20 = TimeGrid(2016, 20)


def test_grid_years():
    grid = TimeGrid(2016, 20)
    assert grid.years[0] == 2016 and grid.years[-1] == 2035
    with pytest.raises(ValueError):
        TimeGrid(2016, 0)


def test_growth_demand_values():
    assert growth_demand(0.01, 90, GRID20).values[0] == 90.0
    np.testing.assert_array_equal(growth_demand(0.0, 90, GRID20).values, 90.0)
    assert growth_demand(0.02, 90, GRID20).values[10] == pytest.approx(90 * 1.02**10)
    assert growth_demand(0.02, 90, GRID20).values[10] == pytest.approx(109.71, abs=0.005)


@pytest.mark.parametrize("rho, initial", [(math.nan, 90), (0.01, math.inf), (-1.0, 90), (0.01, 0)])
def test_growth_demand_rejects(rho, initial):
    with pytest.raises(ValueError):
        growth_demand(rho, initial, GRID20)


def test_demand_rejects_bad_values():
    with pytest.raises(ValueError):
        DemandCurve(TimeGrid(2016, 2), [1.0])
    with pytest.raises(ValueError):
        DemandCurve(TimeGrid(2016, 2), [1.0, -1.0])


@pytest.mark.parametrize("rho", [-0.5, 0.0, 0.01, 0.2])
def test_growth_monotonicity(rho):
    v = growth_demand(rho, 90, GRID20).values
    steps = np.diff(v)
    if rho > 0:
        assert np.all(steps > 0)
    elif rho == 0:
        assert np.all(steps == 0)
    else:
        assert np.all(steps < 0)


def test_upper_bound_values():
    assert growth_upper_bound(0.0, 10, GRID20)[5] == 10
    assert growth_upper_bound(0.02, 10, GRID20)[1] == 11
    assert growth_upper_bound(0.01, 10, GRID20)[0] == 10
    expected = [math.ceil(round(10 * 1.01**t, 9)) for t in range(20)]
    assert growth_upper_bound(0.01, 10, GRID20).tolist() == expected


@settings(max_examples=50)
@given(st.floats(0, 0.2), st.integers(0, 50))
def test_upper_bound_non_decreasing(rho, base):
    assert np.all(np.diff(growth_upper_bound(rho, base, GRID20)) >= 0)


def test_zero_lower_bound():
    assert zero_lower_bound(GRID20).tolist() == [0] * 20
    assert zero_lower_bound(TimeGrid(2016, 1)).tolist() == [0]
    bounds = DeploymentBounds(zero_lower_bound(GRID20), growth_upper_bound(0.0, 10, GRID20))
    assert np.all(bounds.n_options == 11)


def test_bounds_reject_crossing():
    with pytest.raises(ValueError, match="p=1"):
        DeploymentBounds([0, 5, 0], [3, 4, 3])


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-2, 12)), min_size=1, max_size=20))
def test_validate_accepts_exactly_in_bounds(rows):
    lower = [min(a, b) for a, b, _ in rows]
    upper = [max(a, b) for a, b, _ in rows]
    theta = [c for _, _, c in rows]
    bounds = DeploymentBounds(lower, upper)
    inside = all(lo <= c <= hi for lo, hi, c in zip(lower, upper, theta))
    if inside:
        out = bounds.validate(theta)
        assert np.all(bounds.lower <= out) and np.all(out <= bounds.upper)
    else:
        with pytest.raises(ValueError):
            bounds.validate(theta)


def test_validate_rejects_fractional():
    with pytest.raises(ValueError):
        DeploymentBounds([0, 0], [3, 3]).validate([1.5, 2])
