"""Scenario files: flat YAML mappings with units in the key names."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .demand import (
    DemandCurve,
    DeploymentBounds,
    TimeGrid,
    growth_demand,
    growth_upper_bound,
    tabulated_demand,
    zero_lower_bound,
)
from .driver import WorgOptions
from .estimate import EstimationMethod
from .gp import KernelKind
from .simulator import FleetConfig


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    growth_rate: float = 0.0
    initial_gwe: float = 90.0
    start_year: int = 2016
    horizon_years: int = 20
    upper_bound_base: int = 10
    lower_bound: Optional[list] = None
    upper_bound: Optional[list] = None
    demand_gwe: Optional[list] = None

    initial_reactors: int = 100
    unit_capacity_gwe: float = 1.0
    cycle_months: int = 18
    reload_months: int = 1
    initial_retire_span_years: int = 40
    new_lifetime_years: int = 60

    method: str = "all"
    max_sims: int = 20
    max_d_gwe: Optional[float] = None
    seed: int = 424242
    kernel: str = "matern32"
    gamma: Optional[int] = None

    name: str = field(default="scenario", compare=False)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.start_year, self.horizon_years)

    def demand(self) -> DemandCurve:
        if self.demand_gwe is not None:
            return tabulated_demand(self.demand_gwe, self.grid)
        return growth_demand(self.growth_rate, self.initial_gwe, self.grid)

    def bounds(self) -> DeploymentBounds:
        grid = self.grid
        lower = zero_lower_bound(grid) if self.lower_bound is None else self.lower_bound
        if self.upper_bound is None:
            upper = growth_upper_bound(self.growth_rate, self.upper_bound_base, grid)
        else:
            upper = self.upper_bound
        bounds = DeploymentBounds(lower, upper)
        if bounds.size != grid.horizon:
            raise ValueError(
                f"bounds have {bounds.size} entries but the horizon is {grid.horizon} years"
            )
        return bounds

    def fleet(self) -> FleetConfig:
        return FleetConfig(
            initial_count=self.initial_reactors,
            unit_capacity=self.unit_capacity_gwe,
            cycle_months=self.cycle_months,
            reload_months=self.reload_months,
            initial_retire_span_years=self.initial_retire_span_years,
            new_lifetime_years=self.new_lifetime_years,
        )

    def options(self) -> WorgOptions:
        return WorgOptions(
            method=self.method,
            max_sims=self.max_sims,
            max_d=self.max_d_gwe,
            seed=self.seed,
            gamma=self.gamma,
            kernel=self.kernel,
        )

    def with_overrides(self, **kw) -> "Scenario":
        kw = {k: v for k, v in kw.items() if v is not None}
        return dataclasses.replace(self, **kw)

    def validate(self) -> "Scenario":
        """Build every derived object once so errors surface before any run."""
        try:
            EstimationMethod.parse(self.method)
            KernelKind.parse(self.kernel)
            self.demand()
            self.bounds()
            self.fleet()
            self.options()
        except ValueError as exc:
            raise ScenarioError(f"{self.name}: {exc}") from None
        return self


_FIELDS = {f.name: f for f in dataclasses.fields(Scenario) if f.name != "name"}
_INT = {
    "start_year", "horizon_years", "upper_bound_base", "initial_reactors", "cycle_months",
    "reload_months", "initial_retire_span_years", "new_lifetime_years", "max_sims", "seed", "gamma",
}
_FLOAT = {"growth_rate", "initial_gwe", "unit_capacity_gwe", "max_d_gwe"}
_LIST = {"lower_bound", "upper_bound", "demand_gwe"}
_STR = {"method", "kernel"}


def _coerce(key, value, where):
    if value is None:
        if _FIELDS[key].default is None:
            return None
        raise ScenarioError(f"{where}: {key} may not be empty")
    if key in _INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"{where}: {key} must be an integer, got {value!r}")
        return value
    if key in _FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ScenarioError(f"{where}: {key} must be a finite number, got {value!r}")
        return float(value)
    if key in _LIST:
        if not isinstance(value, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise ScenarioError(f"{where}: {key} must be a list of numbers")
        return list(value)
    if key in _STR:
        return str(value)
    raise AssertionError(key)


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{source}: not valid YAML: {exc}") from None
    if root is None:
        data, lines = {}, {}
    elif not isinstance(root, yaml.MappingNode) or not isinstance(data, dict):
        raise ScenarioError(f"{source}: expected a flat key: value mapping")
    else:
        lines = {k.value: k.start_mark.line + 1 for k, _ in root.value}
    values = {}
    for key, value in data.items():
        where = f"{source}:{lines.get(key, '?')}"
        if key not in _FIELDS:
            raise ScenarioError(f"{where}: unknown key {key!r}")
        values[key] = _coerce(key, value, where)
    name = Path(source).stem if source != "<string>" else "scenario"
    return Scenario(name=name, **values).validate()


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


def dump_scenario(scenario: Scenario) -> str:
    data = {k: getattr(scenario, k) for k in _FIELDS}
    data = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in data.items()}
    return yaml.safe_dump(data, sort_keys=False)
