import numpy as np
import pytest

from worg.demand import DeploymentBounds, TimeGrid, growth_demand, growth_upper_bound, zero_lower_bound
from worg.simulator import FleetConfig, make_runner


def reference_scenario(rho):
    """100-reactor fleet, 20 years from 2016, 90 GWe demand growing at ``rho``."""
    grid = TimeGrid(2016, 20)
    demand = growth_demand(rho, 90.0, grid)
    bounds = DeploymentBounds(zero_lower_bound(grid), growth_upper_bound(rho, 10, grid))
    return grid, demand, bounds, make_runner(FleetConfig(), grid)


@pytest.fixture
def steady_scenario():
    return reference_scenario(0.0)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(424242))


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
