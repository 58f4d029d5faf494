"""Deployment-schedule optimization: GP surrogates of simulated production,
scored against demand by dynamic time warping."""

from .demand import (
    DemandCurve,
    DeploymentBounds,
    TimeGrid,
    growth_demand,
    growth_upper_bound,
    zero_lower_bound,
)
from .driver import WorgOptions, WorgResult, optimize, prune_window, select_method
from .dtw import distance
from .estimate import EstimationMethod, HistoryWindow
from .gp import KernelKind
from .scenario import Scenario, load_scenario
from .simulator import FleetConfig, make_runner, run_sim, simulate

__all__ = [
    "DemandCurve",
    "DeploymentBounds",
    "EstimationMethod",
    "FleetConfig",
    "HistoryWindow",
    "KernelKind",
    "Scenario",
    "TimeGrid",
    "WorgOptions",
    "WorgResult",
    "distance",
    "growth_demand",
    "growth_upper_bound",
    "load_scenario",
    "make_runner",
    "optimize",
    "prune_window",
    "run_sim",
    "select_method",
    "simulate",
    "zero_lower_bound",
]
