"""Time grids, demand curves and deployment bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Consecutive whole years ``start_year, ..., start_year + horizon - 1``."""

    start_year: int
    horizon: int

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValueError(f"horizon must be a positive integer, got {self.horizon!r}")
        if int(self.start_year) != self.start_year:
            raise ValueError(f"start_year must be an integer, got {self.start_year!r}")

    @property
    def offsets(self) -> np.ndarray:
        """Year offsets t = 0 .. T-1."""
        return np.arange(self.horizon)

    @property
    def years(self) -> np.ndarray:
        return self.start_year + self.offsets


@dataclass(frozen=True)
class DemandCurve:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = _frozen(self.values, float)
        if values.shape != (self.grid.horizon,):
            raise ValueError(
                f"demand has {values.size} values but the grid has {self.grid.horizon} steps"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("demand values must be finite and non-negative")
        object.__setattr__(self, "values", values)

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class DeploymentBounds:
    """Inclusive per-parameter bounds ``lower <= theta <= upper``.

    Only one facility type is supported, so there is one parameter per time
    step. Multi-type schedules would lengthen ``lower``/``upper`` past the
    horizon; nothing downstream handles that yet.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        for name, arr in (("lower", lower), ("upper", upper)):
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError(f"{name} bound must be a non-empty 1-D sequence")
            if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
                raise ValueError(f"{name} bound must contain whole numbers")
        if lower.shape != upper.shape:
            raise ValueError(
                f"bounds length mismatch: {lower.size} lower vs {upper.size} upper"
            )
        if np.any(lower < 0):
            p = int(np.flatnonzero(lower < 0)[0])
            raise ValueError(f"lower bound is negative at p={p}")
        bad = np.flatnonzero(lower > upper)
        if bad.size:
            p = int(bad[0])
            raise ValueError(
                f"lower bound exceeds upper bound at p={p} ({int(lower[p])} > {int(upper[p])})"
            )
        object.__setattr__(self, "lower", _frozen(lower, np.int64))
        object.__setattr__(self, "upper", _frozen(upper, np.int64))

    @property
    def size(self) -> int:
        """Number of deployment parameters P."""
        return self.lower.size

    @property
    def n_options(self) -> np.ndarray:
        return self.upper - self.lower + 1

    def options(self, p: int) -> np.ndarray:
        return np.arange(self.lower[p], self.upper[p] + 1)

    def span(self) -> np.ndarray:
        """Width of each parameter range, with 1 substituted for fixed parameters."""
        width = (self.upper - self.lower).astype(float)
        width[width == 0] = 1.0
        return width

    def validate(self, counts) -> np.ndarray:
        """Return ``counts`` as a read-only integer schedule, or raise if out of bounds."""
        arr = np.asarray(counts)
        if arr.shape != (self.size,):
            raise ValueError(f"schedule must have {self.size} entries, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise ValueError("schedule entries must be whole numbers")
        arr = arr.astype(np.int64)
        bad = np.flatnonzero((arr < self.lower) | (arr > self.upper))
        if bad.size:
            p = int(bad[0])
            raise ValueError(
                f"theta[{p}]={arr[p]} outside [{self.lower[p]}, {self.upper[p]}]"
            )
        return _frozen(arr, np.int64)


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


def growth_demand(rho: float, initial: float, grid: TimeGrid) -> DemandCurve:
    """Exponential demand ``initial * (1 + rho)**t`` with t = 0 at the start year."""
    _check_finite(rho=rho, initial=initial)
    if initial <= 0:
        raise ValueError("initial demand must be positive")
    if rho <= -1:
        raise ValueError("growth rate must exceed -1")
    return DemandCurve(grid, initial * (1.0 + rho) ** grid.offsets)


def tabulated_demand(values, grid: TimeGrid) -> DemandCurve:
    return DemandCurve(grid, values)


def growth_upper_bound(rho: float, base: int, grid: TimeGrid) -> np.ndarray:
    """Per-year deployment ceiling ``ceil(base * (1 + rho)**t)``."""
    _check_finite(rho=rho)
    if base < 0 or int(base) != base:
        raise ValueError("base must be a non-negative integer")
    if rho <= -1:
        raise ValueError("growth rate must exceed -1")
    raw = base * (1.0 + rho) ** grid.offsets
    # 10 * 1.01**t can land a hair above an integer through round-off
    return np.ceil(np.round(raw, 9)).astype(np.int64)


def zero_lower_bound(grid: TimeGrid) -> np.ndarray:
    return np.zeros(grid.horizon, dtype=np.int64)
