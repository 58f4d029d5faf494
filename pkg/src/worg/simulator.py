"""Analytic once-through reactor fleet standing in for a fuel-cycle simulator.

Production is the number of operating reactors times unit capacity times a
flat capacity factor ``cycle / (cycle + reload)``. The initial fleet retires
linearly (floored to whole reactors); new builds run from their deployment
year for ``new_lifetime_years`` years.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .demand import DemandCurve, TimeGrid
from .dtw import distance


@dataclass(frozen=True)
class FleetConfig:
    initial_count: int = 100
    unit_capacity: float = 1.0
    cycle_months: int = 18
    reload_months: int = 1
    initial_retire_span_years: int = 40
    new_lifetime_years: int = 60

    def __post_init__(self):
        for name in (
            "unit_capacity",
            "cycle_months",
            "initial_retire_span_years",
            "new_lifetime_years",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.initial_count < 0 or self.reload_months < 0:
            raise ValueError("initial_count and reload_months must be non-negative")

    @property
    def capacity_factor(self) -> float:
        return self.cycle_months / (self.cycle_months + self.reload_months)


@dataclass(frozen=True)
class ProductionCurve:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SimResult:
    schedule: np.ndarray = field(repr=False)
    production: ProductionCurve
    dist: float


# the optimizer depends only on this call shape, so an external simulator
# adapter can be dropped in
RunSim = Callable[[np.ndarray, DemandCurve], SimResult]


def active_initial_fleet(config: FleetConfig, t) -> np.ndarray | int:
    """Initial reactors still operating at year offset ``t``."""
    t = np.asarray(t)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    n0 = config.initial_count
    retired = (n0 * t) // config.initial_retire_span_years
    active = np.maximum(n0 - retired, 0)
    return int(active) if active.ndim == 0 else active


def operating_new_builds(config: FleetConfig, schedule) -> np.ndarray:
    """Count of new reactors operating in each year of the schedule's grid."""
    theta = np.asarray(schedule, dtype=np.int64)
    T = theta.size
    cumulative = np.concatenate(([0], np.cumsum(theta)))
    t = np.arange(T)
    oldest = np.maximum(t - config.new_lifetime_years + 1, 0)
    return cumulative[t + 1] - cumulative[oldest]


def simulate(config: FleetConfig, grid: TimeGrid, schedule) -> ProductionCurve:
    theta = np.asarray(schedule)
    if theta.shape != (grid.horizon,):
        raise ValueError(f"schedule length {theta.size} != horizon {grid.horizon}")
    if np.any(theta < 0) or np.any(theta != np.round(theta)):
        raise ValueError("schedule entries must be non-negative whole numbers")
    reactors = active_initial_fleet(config, grid.offsets) + operating_new_builds(config, theta)
    values = config.capacity_factor * config.unit_capacity * reactors.astype(float)
    values.setflags(write=False)
    return ProductionCurve(grid, values)


def run_sim(config: FleetConfig, grid: TimeGrid, schedule, demand: DemandCurve) -> SimResult:
    production = simulate(config, grid, schedule)
    theta = np.array(schedule, dtype=np.int64)
    theta.setflags(write=False)
    return SimResult(theta, production, distance(demand.values, production.values))


def make_runner(config: FleetConfig, grid: TimeGrid) -> RunSim:
    def runner(schedule, demand: DemandCurve) -> SimResult:
        return run_sim(config, grid, schedule, demand)

    return runner
