"""The outer optimization loop: seed with the bounds, estimate, simulate, prune."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .demand import DemandCurve, DeploymentBounds
from .estimate import (
    Candidate,
    EstimationMethod,
    HistoryWindow,
    estimate,
    estimate_stochastic,
)
from .gp import FitFailure, KernelKind
from .simulator import RunSim, SimResult

logger = logging.getLogger(__name__)

DEFAULT_SEED = 424242


class SimulationAborted(RuntimeError):
    """The simulator raised; ``trace`` holds every simulation completed before it."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = tuple(trace)


@dataclass(frozen=True)
class WorgOptions:
    """Loop settings.

    ``max_d`` of ``None`` means 1% of the mean demand. ``gamma`` of ``None``
    means the sum of per-parameter option counts.
    """

    method: EstimationMethod = EstimationMethod.ALL
    max_sims: int = 20
    max_d: Optional[float] = None
    seed: int = DEFAULT_SEED
    gamma: Optional[int] = None
    kernel: KernelKind = KernelKind.MATERN32

    def __post_init__(self):
        object.__setattr__(self, "method", EstimationMethod.parse(self.method))
        object.__setattr__(self, "kernel", KernelKind.parse(self.kernel))
        if self.max_sims < 3:
            raise ValueError("max_sims must be at least 3")
        if self.max_d is not None and not self.max_d >= 0:
            raise ValueError("max_d must be non-negative")
        if self.gamma is not None and self.gamma < 1:
            raise ValueError("gamma must be positive")

    def threshold(self, demand: DemandCurve) -> float:
        return 0.01 * demand.mean if self.max_d is None else float(self.max_d)


@dataclass(frozen=True)
class TraceRecord:
    """One simulation. ``method`` is ``None`` for the two bound seeds.

    For the 'all' method, ``method`` is the estimator whose candidate won.
    """

    s: int
    method: Optional[EstimationMethod]
    schedule: np.ndarray = field(repr=False)
    production: np.ndarray = field(repr=False)
    dist: float
    model_distance: float = math.nan


@dataclass(frozen=True)
class WorgResult:
    trace: tuple

    @property
    def best(self) -> TraceRecord:
        # min() keeps the earliest simulation among equal distances
        return min(self.trace, key=lambda r: r.dist)

    @property
    def best_schedule(self) -> np.ndarray:
        return self.best.schedule

    @property
    def best_curve(self) -> np.ndarray:
        return self.best.production

    @property
    def best_dist(self) -> float:
        return self.best.dist

    @property
    def second_best(self) -> Optional[TraceRecord]:
        ranked = sorted(self.trace, key=lambda r: r.dist)
        return ranked[1] if len(ranked) > 1 else None

    @property
    def n_sims(self) -> int:
        return len(self.trace)

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate([r.dist for r in self.trace])


def select_method(initial: EstimationMethod, s: int) -> EstimationMethod:
    """With 'all', iterations where ``s % 4`` is 2 or 3 are forced stochastic."""
    initial = EstimationMethod.parse(initial)
    if initial is EstimationMethod.ALL and s % 4 in (2, 3):
        return EstimationMethod.STOCHASTIC
    return initial


def prune_window(window: HistoryWindow) -> HistoryWindow:
    """Keep the two lowest distances, plus the newest entry if it is the worst."""
    if len(window) < 2:
        raise ValueError("window must hold at least two entries")
    D = np.asarray(window.dists)
    idx = [int(i) for i in np.argsort(D, kind="stable")[:2]]
    newest = len(D) - 1
    if D[newest] == D.max() and newest not in idx:
        idx.append(newest)
    return window.subset(idx)


def _record(s, method, result: SimResult, model_distance=math.nan) -> TraceRecord:
    return TraceRecord(
        s, method, result.schedule, result.production.values, result.dist, model_distance
    )


def optimize(
    demand: DemandCurve,
    bounds: DeploymentBounds,
    run_sim: RunSim,
    options: WorgOptions = WorgOptions(),
    progress: Optional[Callable[[TraceRecord], None]] = None,
) -> WorgResult:
    """Search for the schedule whose simulated production is DTW-closest to demand.

    Runs the lower and upper bound schedules first, then iterates estimate,
    simulate, prune until the latest simulated distance is at most the
    threshold or ``max_sims`` simulations have run. All randomness comes from
    one ``numpy.random.Generator(PCG64(seed))`` created here.

    The returned result holds every simulation; its ``best`` is the global
    minimum, which may since have been pruned from the window.
    """
    rng = np.random.Generator(np.random.PCG64(options.seed))
    max_d = options.threshold(demand)
    trace = []

    def emit(rec):
        trace.append(rec)
        if progress is not None:
            progress(rec)

    def simulate(schedule):
        try:
            return run_sim(schedule, demand)
        except Exception as exc:
            raise SimulationAborted(f"simulation {len(trace)} failed: {exc}", trace) from exc

    window = HistoryWindow((), (), ())
    for s, seed_schedule in enumerate((bounds.lower, bounds.upper)):
        res = simulate(seed_schedule)
        emit(_record(s, None, res))
        window = window.append(res.schedule, res.production.values, res.dist)

    s = 2
    last = trace[-1].dist
    while max_d < last and s < options.max_sims:
        method = select_method(options.method, s)
        cand = _estimate(method, window, demand, bounds, rng, options)
        res = simulate(cand.schedule)
        logger.debug("s=%d %s d=%.6g model=%.6g", s, cand.method.value, res.dist, cand.model_distance)
        emit(_record(s, cand.method, res, cand.model_distance))
        window = prune_window(window.append(res.schedule, res.production.values, res.dist))
        last = res.dist
        s += 1

    return WorgResult(tuple(trace))


def _estimate(method, window, demand, bounds, rng, options) -> Candidate:
    try:
        return estimate(
            method, window, demand, bounds, rng, kind=options.kernel, gamma=options.gamma
        )
    except FitFailure:
        logger.info("%s estimator failed; falling back to stochastic", method.value)
        return estimate_stochastic(
            window, demand, bounds, rng, kind=options.kernel, gamma=options.gamma
        )
