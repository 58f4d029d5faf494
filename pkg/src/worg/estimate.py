"""Next-schedule estimation from the retained simulation window.

Every estimator fits a production surrogate on the window (one GP row per
``(year, schedule)`` pair) and picks the candidate schedule whose *predicted*
production curve is DTW-closest to demand.

* stochastic: draw ``gamma`` schedules from per-parameter weights (an
  inverse-distance GP over each parameter, or a truncated Poisson around the
  best known value when that GP is unusable) and keep the best.
* inner-prod: sweep the years in order, fixing each parameter to the value
  that minimizes the distance on the years seen so far.
* all: run both and keep the lower model distance (ties go to inner-prod).
"""

from __future__ import annotations

import enum
import functools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from . import gp
from .demand import DemandCurve, DeploymentBounds
from .dtw import distance_many
from .gp import FitFailure, KernelKind

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-12
MIN_DISTANCE = 1e-12


class EstimationMethod(enum.Enum):
    STOCHASTIC = "stochastic"
    INNER_PROD = "inner-prod"
    ALL = "all"

    @classmethod
    def parse(cls, name) -> "EstimationMethod":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        if key == "innerprod":
            key = "inner-prod"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown estimation method {name!r}") from None


@dataclass(frozen=True)
class HistoryWindow:
    """Parallel schedules, simulated production curves and DTW distances."""

    schedules: tuple = field(repr=False)
    curves: tuple = field(repr=False)
    dists: tuple

    def __post_init__(self):
        n = len(self.dists)
        if len(self.schedules) != n or len(self.curves) != n:
            raise ValueError("window sequences must have equal lengths")
        object.__setattr__(self, "schedules", tuple(np.asarray(s, dtype=np.int64) for s in self.schedules))
        object.__setattr__(self, "curves", tuple(np.asarray(c, dtype=float) for c in self.curves))
        object.__setattr__(self, "dists", tuple(float(d) for d in self.dists))

    def __len__(self) -> int:
        return len(self.dists)

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.dists))

    def subset(self, idx: Sequence[int]) -> "HistoryWindow":
        return HistoryWindow(
            tuple(self.schedules[i] for i in idx),
            tuple(self.curves[i] for i in idx),
            tuple(self.dists[i] for i in idx),
        )

    def append(self, schedule, curve, dist) -> "HistoryWindow":
        return HistoryWindow(
            self.schedules + (schedule,), self.curves + (curve,), self.dists + (dist,)
        )


@dataclass(frozen=True)
class Candidate:
    schedule: np.ndarray = field(repr=False)
    model_distance: float
    method: EstimationMethod


def default_gamma(bounds: DeploymentBounds) -> int:
    """Sum over parameters of the number of options, ``sum(N_p - M_p + 1)``."""
    return int(np.sum(bounds.n_options))


# ---------------------------------------------------------------- weights


def poisson_weights(lam: float, options: np.ndarray) -> np.ndarray:
    """Poisson(lam) masses on ``options``, renormalized over that range."""
    options = np.asarray(options)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if lam == 0:
        w = (options == 0).astype(float)
        if w.sum() == 0:
            # all mass sits below the range; the lowest option is closest
            w[0] = 1.0
        return w
    logw = options * np.log(lam) - gammaln(options + 1.0)
    return np.exp(logw - logsumexp(logw))


def _normalize_row(values: np.ndarray) -> np.ndarray | None:
    w = np.where(np.isfinite(values), values, 0.0)
    w = np.maximum(w, WEIGHT_FLOOR)
    if np.all(w <= WEIGHT_FLOOR):
        return None
    return w / w.sum()


def stochastic_weights(
    window: HistoryWindow,
    bounds: DeploymentBounds,
    p: int,
    kind: KernelKind = KernelKind.MATERN32,
) -> np.ndarray:
    """Sampling weights over ``bounds.options(p)``.

    A 1-D GP of inverse distance against the window's values of parameter
    ``p`` is evaluated over the option range. When that model cannot be
    trusted (shared support, near-zero distances, failed fit, non-finite or
    all-floor predictions) a renormalized Poisson centered on the best
    schedule's value is returned instead.
    """
    options = bounds.options(p)
    dists = np.asarray(window.dists)
    thetas = np.array([s[p] for s in window.schedules], dtype=float)
    lam = float(window.schedules[window.best_index][p])

    if options.size == 1:
        return np.ones(1)
    usable = (
        len(window) >= 2
        and np.all(np.isfinite(dists))
        and np.all(dists >= MIN_DISTANCE)
        and np.unique(thetas).size >= 2
    )
    if usable:
        lo, width = bounds.lower[p], bounds.span()[p]
        pred = _inverse_distance_curve(
            KernelKind.parse(kind),
            tuple((thetas - lo) / width),
            tuple(1.0 / dists),
            tuple((options - lo) / width),
        )
        if pred is not None and np.all(np.isfinite(pred)):
            row = _normalize_row(pred)
            if row is not None:
                return row
    return poisson_weights(lam, options)


@functools.lru_cache(maxsize=4096)
def _inverse_distance_curve(kind, x, inv_d, query):
    # many parameters share identical normalized supports, so fits are cached
    try:
        model = gp.fit(np.array(x), np.array(inv_d), kind)
        pred = gp.predict_mean(model, np.array(query))
    except FitFailure:
        return None
    pred.setflags(write=False)
    return pred


def weight_table(window, bounds, kind=KernelKind.MATERN32) -> list[np.ndarray]:
    return [stochastic_weights(window, bounds, p, kind) for p in range(bounds.size)]


def uniform_table(bounds: DeploymentBounds) -> list[np.ndarray]:
    return [np.full(n, 1.0 / n) for n in bounds.n_options]


def sample_schedules(
    weights: Sequence[np.ndarray],
    bounds: DeploymentBounds,
    gamma: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw ``gamma`` schedules, shape ``(gamma, P)``.

    Parameters are drawn independently, all ``gamma`` values of parameter 0
    first, then parameter 1, and so on, from the single stream ``rng``.
    """
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    out = np.empty((gamma, bounds.size), dtype=np.int64)
    for p, w in enumerate(weights):
        out[:, p] = rng.choice(bounds.options(p), size=gamma, p=w)
    return out


# ---------------------------------------------------------------- surrogate


@dataclass(frozen=True)
class ProductionModel:
    """GP over ``(t, theta_1..theta_P)`` rows, each axis scaled to ``[0, 1]``."""

    model: gp.GpModel
    bounds: DeploymentBounds
    horizon: int

    def _time_axis(self, t_idx) -> np.ndarray:
        return np.asarray(t_idx, dtype=float) / max(self.horizon - 1, 1)

    def predict(self, schedules, t_idx=None) -> np.ndarray:
        """Predicted production, shape ``(K, len(t_idx))``, for ``(K, P)`` schedules."""
        S = np.atleast_2d(np.asarray(schedules, dtype=float))
        t_idx = np.arange(self.horizon) if t_idx is None else np.asarray(t_idx)
        theta = (S - self.bounds.lower) / self.bounds.span()
        K, nt = S.shape[0], t_idx.size
        rows = np.empty((K, nt, 1 + self.bounds.size))
        rows[:, :, 0] = self._time_axis(t_idx)[None, :]
        rows[:, :, 1:] = theta[:, None, :]
        return gp.predict_mean(self.model, rows.reshape(K * nt, -1)).reshape(K, nt)


def fit_production_model(
    window: HistoryWindow,
    bounds: DeploymentBounds,
    kind: KernelKind = KernelKind.MATERN32,
    tau: float = gp.DEFAULT_TAU,
) -> ProductionModel:
    T = window.curves[0].size
    if bounds.size != T:
        raise ValueError("only one facility type (P == T) is supported")
    shell = ProductionModel(None, bounds, T)
    t_axis = shell._time_axis(np.arange(T))
    rows, targets = [], []
    for schedule, curve in zip(window.schedules, window.curves):
        theta = (schedule - bounds.lower) / bounds.span()
        block = np.empty((T, 1 + bounds.size))
        block[:, 0] = t_axis
        block[:, 1:] = theta[None, :]
        rows.append(block)
        targets.append(curve)
    model = gp.fit(np.vstack(rows), np.concatenate(targets), kind, tau)
    return ProductionModel(model, bounds, T)


# ---------------------------------------------------------------- estimators


def _nearest_curve_distances(window, samples, demand) -> np.ndarray:
    """Stand-in model: each sample borrows the curve of its L1-nearest window schedule."""
    W = np.vstack(window.schedules)
    nearest = np.argmin(np.abs(samples[:, None, :] - W[None, :, :]).sum(axis=2), axis=1)
    window_d = distance_many(demand.values, np.vstack(window.curves))
    return window_d[nearest]


def estimate_stochastic(
    window: HistoryWindow,
    demand: DemandCurve,
    bounds: DeploymentBounds,
    rng: np.random.Generator,
    *,
    kind: KernelKind = KernelKind.MATERN32,
    gamma: int | None = None,
) -> Candidate:
    gamma = default_gamma(bounds) if gamma is None else int(gamma)
    try:
        model = fit_production_model(window, bounds, kind)
    except FitFailure:
        logger.info("production GP failed; sampling uniformly with nearest-curve lookup")
        samples = sample_schedules(uniform_table(bounds), bounds, gamma, rng)
        scores = _nearest_curve_distances(window, samples, demand)
    else:
        weights = weight_table(window, bounds, kind)
        samples = sample_schedules(weights, bounds, gamma, rng)
        scores = distance_many(demand.values, model.predict(samples))
    # np.argmin keeps the first-drawn schedule among equals
    best = int(np.argmin(scores))
    return Candidate(bounds.validate(samples[best]), float(scores[best]), EstimationMethod.STOCHASTIC)


def estimate_inner_prod(
    window: HistoryWindow,
    demand: DemandCurve,
    bounds: DeploymentBounds,
    *,
    kind: KernelKind = KernelKind.MATERN32,
) -> Candidate:
    """Greedy year-by-year sweep on the surrogate.

    At year ``p`` each option ``n`` is placed after the already-fixed prefix;
    parameters after ``p`` sit at their lower bounds until swept. The option with the smallest DTW distance over years ``0..p`` is kept, the
    smallest ``n`` winning ties. Raises :class:`FitFailure` if the surrogate
    cannot be fit.
    """
    model = fit_production_model(window, bounds, kind)
    schedule = np.array(bounds.lower, dtype=np.int64)
    f = demand.values
    for p in range(bounds.size):
        options = bounds.options(p)
        trial = np.repeat(schedule[None, :], options.size, axis=0)
        trial[:, p] = options
        t_idx = np.arange(p + 1)
        scores = distance_many(f[: p + 1], model.predict(trial, t_idx))
        schedule[p] = options[int(np.argmin(scores))]
    final = float(distance_many(f, model.predict(schedule))[0])
    return Candidate(bounds.validate(schedule), final, EstimationMethod.INNER_PROD)


def estimate_all(
    window: HistoryWindow,
    demand: DemandCurve,
    bounds: DeploymentBounds,
    rng: np.random.Generator,
    *,
    kind: KernelKind = KernelKind.MATERN32,
    gamma: int | None = None,
) -> Candidate:
    """Run both estimators; the lower model distance wins, inner-prod on ties."""
    try:
        inner = estimate_inner_prod(window, demand, bounds, kind=kind)
    except FitFailure:
        inner = None
    stoch = estimate_stochastic(window, demand, bounds, rng, kind=kind, gamma=gamma)
    if inner is None:
        return stoch
    return inner if inner.model_distance <= stoch.model_distance else stoch


def estimate(
    method: EstimationMethod,
    window: HistoryWindow,
    demand: DemandCurve,
    bounds: DeploymentBounds,
    rng: np.random.Generator,
    *,
    kind: KernelKind = KernelKind.MATERN32,
    gamma: int | None = None,
) -> Candidate:
    method = EstimationMethod.parse(method)
    if method is EstimationMethod.STOCHASTIC:
        return estimate_stochastic(window, demand, bounds, rng, kind=kind, gamma=gamma)
    if method is EstimationMethod.INNER_PROD:
        return estimate_inner_prod(window, demand, bounds, kind=kind)
    return estimate_all(window, demand, bounds, rng, kind=kind, gamma=gamma)
