"""Isotropic Gaussian-process regression with three stationary kernels.

Inputs are expected to be normalized to roughly ``[0, 1]`` per dimension by the
caller, since a single length scale is shared across all dimensions. Targets
are standardized (centered, and scaled by their standard deviation) inside
:func:`fit`, so ``tau`` and the fitted signal variance are in standardized
units.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.optimize import minimize

LOG_2PI = math.log(2.0 * math.pi)
DEFAULT_TAU = 1e-6
JITTER_LADDER = (1.0, 10.0, 100.0)

# search box for (log ell, log sigma^2), standardized units
_LOG_BOUNDS = ((math.log(1e-3), math.log(1e3)), (math.log(1e-3), math.log(1e3)))
_RESTARTS = ((0.1, 1.0), (0.5, 1.0), (2.0, 1.0), (0.5, 0.1))
_PENALTY = 1e25


class FitFailure(RuntimeError):
    """The covariance could not be factorized or the likelihood was not finite."""


class KernelKind(enum.Enum):
    EXP_SQUARED = "exp-squared"
    MATERN32 = "matern32"
    MATERN52 = "matern52"

    @classmethod
    def parse(cls, name: str | "KernelKind") -> "KernelKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "exp-squared": cls.EXP_SQUARED,
            "expsquared": cls.EXP_SQUARED,
            "exp2": cls.EXP_SQUARED,
            "matern32": cls.MATERN32,
            "matern-32": cls.MATERN32,
            "matern52": cls.MATERN52,
            "matern-52": cls.MATERN52,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown kernel {name!r}") from None


@dataclass(frozen=True)
class Hyperparameters:
    length_scale: float
    signal_variance: float

    def __post_init__(self):
        for name in ("length_scale", "signal_variance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def _as_2d(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr[:, None]
    return arr


def _profile(kind: KernelKind, hyper: Hyperparameters, sqdist: np.ndarray) -> np.ndarray:
    ell = hyper.length_scale
    s2 = hyper.signal_variance
    if kind is KernelKind.EXP_SQUARED:
        # ell divides the squared separation directly (not ell**2)
        return s2 * np.exp(-0.5 * sqdist / ell)
    r = np.sqrt(sqdist)
    if kind is KernelKind.MATERN32:
        z = math.sqrt(3.0) * r / ell
        return s2 * (1.0 + z) * np.exp(-z)
    if kind is KernelKind.MATERN52:
        z = math.sqrt(5.0) * r / ell
        return s2 * (1.0 + z + z * z / 3.0) * np.exp(-z)
    raise ValueError(f"unsupported kernel {kind!r}")


def kernel(kind: KernelKind, hyper: Hyperparameters, r, r_prime) -> float:
    """Kernel value between two points using their Euclidean separation."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    r_prime = np.atleast_1d(np.asarray(r_prime, dtype=float))
    if r.shape != r_prime.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {r_prime.shape}")
    return float(_profile(kind, hyper, np.asarray(np.sum((r - r_prime) ** 2))))


def kernel_matrix(kind: KernelKind, hyper: Hyperparameters, X, Y=None) -> np.ndarray:
    X = _as_2d(X)
    Y = X if Y is None else _as_2d(Y)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    sq = (
        np.sum(X**2, axis=1)[:, None]
        + np.sum(Y**2, axis=1)[None, :]
        - 2.0 * X @ Y.T
    )
    np.maximum(sq, 0.0, out=sq)
    if Y is X:
        np.fill_diagonal(sq, 0.0)
    return _profile(kind, hyper, sq)


def _factor(K: np.ndarray, tau: float):
    """Cholesky of ``K + tau^2 I``, walking up the jitter ladder on failure.

    Returns ``(factor, tau_used)``.
    """
    n = K.shape[0]
    for mult in JITTER_LADDER:
        t = tau * mult
        A = K + (t * t) * np.eye(n)
        try:
            c = cho_factor(A, lower=True, check_finite=True)
        except (np.linalg.LinAlgError, ValueError):
            continue
        # a factorization with a near-zero pivot is as useless as a failure
        diag = np.diag(c[0])
        if np.all(diag > 0) and np.min(diag) ** 2 > 1e-14 * np.max(np.diag(A)):
            return c, t
    raise FitFailure("covariance matrix is not positive definite")


@dataclass(frozen=True)
class GpModel:
    """A fitted (or hand-built) GP with its factorized training covariance.

    ``train_targets`` holds the raw targets; the GP itself sees
    ``(train_targets - y_offset) / y_scale``.
    """

    kind: KernelKind
    hyper: Hyperparameters
    tau: float
    train_inputs: np.ndarray = field(repr=False)
    train_targets: np.ndarray = field(repr=False)
    y_offset: float = 0.0
    y_scale: float = 1.0
    factor: tuple = field(default=None, repr=False, compare=False)
    alpha: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def build(cls, inputs, targets, kind, hyper, tau=DEFAULT_TAU, *, y_offset=0.0, y_scale=1.0):
        """Factorize the training covariance for fixed hyperparameters.

        Raises :class:`FitFailure` if ``K + tau^2 I`` cannot be factorized even
        after jitter. ``tau`` on the returned model is the jitter actually used.
        """
        kind = KernelKind.parse(kind)
        X = _as_2d(inputs)
        y = np.asarray(targets, dtype=float).ravel()
        if X.shape[0] != y.size:
            raise ValueError(f"{X.shape[0]} inputs but {y.size} targets")
        if y.size == 0:
            raise ValueError("need at least one training point")
        if tau < 0:
            raise ValueError("tau must be non-negative")
        K = kernel_matrix(kind, hyper, X)
        factor, tau_used = _factor(K, tau)
        z = (y - y_offset) / y_scale
        alpha = cho_solve(factor, z)
        X.setflags(write=False)
        return cls(kind, hyper, tau_used, X, y, float(y_offset), float(y_scale), factor, alpha)

    @property
    def standardized_targets(self) -> np.ndarray:
        return (self.train_targets - self.y_offset) / self.y_scale

    @property
    def dim(self) -> int:
        return self.train_inputs.shape[1]

    def _cross(self, query) -> np.ndarray:
        Q = _as_2d(query)
        if Q.shape[1] != self.dim:
            raise ValueError(f"query dimension {Q.shape[1]} != training dimension {self.dim}")
        return kernel_matrix(self.kind, self.hyper, Q, self.train_inputs)


def log_likelihood(model: GpModel) -> float:
    """Log marginal likelihood of the (standardized) training targets.

    ``-1/2 y^T (K + tau^2 I)^-1 y - 1/2 log|K + tau^2 I| - n/2 log(2 pi)``
    """
    y = model.standardized_targets
    L = model.factor[0]
    logdet = 2.0 * np.sum(np.log(np.diag(L)))
    value = -0.5 * float(y @ model.alpha) - 0.5 * logdet - 0.5 * y.size * LOG_2PI
    if not math.isfinite(value):
        raise FitFailure("log likelihood is not finite")
    return value


def _standardize(y: np.ndarray) -> tuple[float, float]:
    offset = float(np.mean(y))
    scale = float(np.std(y))
    if not math.isfinite(scale) or scale <= 1e-12 * max(1.0, abs(offset)):
        scale = 1.0
    return offset, scale


def fit(inputs, targets, kind=KernelKind.MATERN32, tau: float = DEFAULT_TAU) -> GpModel:
    """Fit ``(length_scale, signal_variance)`` by maximizing the log likelihood.

    Bounded Nelder-Mead over the logs of both hyperparameters, started from a
    fixed set of points; the best finite optimum wins. Deterministic for fixed
    inputs.
    """
    kind = KernelKind.parse(kind)
    X = _as_2d(inputs)
    y = np.asarray(targets, dtype=float).ravel()
    if X.shape[0] != y.size:
        raise ValueError(f"{X.shape[0]} inputs but {y.size} targets")
    if y.size < 2:
        raise ValueError("need at least two training points to fit")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise FitFailure("training data contains non-finite values")
    offset, scale = _standardize(y)
    z = (y - offset) / scale
    # squared distances are shared by every likelihood evaluation
    sq = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=-1)
    n = y.size
    eye = np.eye(n)

    def neg_ll(params):
        hyper = Hyperparameters(math.exp(params[0]), math.exp(params[1]))
        A = _profile(kind, hyper, sq) + tau * tau * eye
        try:
            L = np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            return _PENALTY
        diag = np.diag(L)
        if np.any(diag <= 0):
            return _PENALTY
        w = np.linalg.solve(L, z)
        val = 0.5 * (w @ w) + np.sum(np.log(diag)) + 0.5 * n * LOG_2PI
        return float(val) if math.isfinite(val) else _PENALTY

    best = None
    for ell0, s0 in _RESTARTS:
        x0 = np.array([math.log(ell0), math.log(s0)])
        res = minimize(
            neg_ll,
            x0,
            method="Nelder-Mead",
            bounds=_LOG_BOUNDS,
            options={"xatol": 1e-4, "fatol": 1e-8, "maxiter": 200},
        )
        if res.fun < _PENALTY and (best is None or res.fun < best.fun):
            best = res

    if best is None:
        raise FitFailure("no restart produced a positive-definite covariance")
    hyper = Hyperparameters(math.exp(best.x[0]), math.exp(best.x[1]))
    model = GpModel.build(X, y, kind, hyper, tau, y_offset=offset, y_scale=scale)
    log_likelihood(model)
    return model


def predict_mean(model: GpModel, query) -> np.ndarray:
    """Posterior mean ``k*^T (K + tau^2 I)^-1 y``, in the original target units."""
    return model.y_offset + model.y_scale * (model._cross(query) @ model.alpha)


def predict_variance(model: GpModel, query) -> np.ndarray:
    """Posterior (latent) variance, in squared target units, clamped at zero."""
    Ks = model._cross(query)
    L = model.factor[0]
    v = solve_triangular(L, Ks.T, lower=True)
    prior = model.hyper.signal_variance
    var = prior - np.sum(v * v, axis=0)
    return np.maximum(var, 0.0) * model.y_scale**2
