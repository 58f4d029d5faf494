"""Dynamic time warping between two annual series.

Indices are zero-based: the warp path runs from ``(0, 0)`` to ``(A-1, B-1)``.
The cost matrix uses the textbook recursion

    C[a, b] = dL[a, b] + min(C[a-1, b-1], C[a-1, b], C[a, b-1])

with out-of-range predecessors treated as +inf, and the distance is
``C[A-1, B-1] / (A + B)``.
"""

from __future__ import annotations

import numpy as np


def _series(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D series")
    return arr


def abs_difference_matrix(f, g) -> np.ndarray:
    """``dL[a, b] = |f[a] - g[b]|``."""
    f = _series(f, "f")
    g = _series(g, "g")
    return np.abs(f[:, None] - g[None, :])


def cost_matrix(delta) -> np.ndarray:
    delta = np.asarray(delta, dtype=float)
    if delta.ndim != 2 or delta.size == 0:
        raise ValueError("difference matrix must be non-empty and 2-D")
    A, B = delta.shape
    C = np.empty_like(delta)
    C[0, :] = np.cumsum(delta[0, :])
    C[:, 0] = np.cumsum(delta[:, 0])
    for a in range(1, A):
        prev = C[a - 1]
        row = C[a]
        d = delta[a]
        for b in range(1, B):
            row[b] = d[b] + min(prev[b - 1], prev[b], row[b - 1])
    return C


def warp_path(C) -> list[tuple[int, int]]:
    """Backtrack the minimum-cost monotone path from the far corner to ``(0, 0)``.

    Ties prefer the diagonal predecessor, then ``(a-1, b)``, then ``(a, b-1)``.
    """
    C = np.asarray(C, dtype=float)
    a, b = C.shape[0] - 1, C.shape[1] - 1
    path = [(a, b)]
    while a > 0 or b > 0:
        if a == 0:
            b -= 1
        elif b == 0:
            a -= 1
        else:
            steps = ((a - 1, b - 1), (a - 1, b), (a, b - 1))
            a, b = min(steps, key=lambda ab: C[ab])
        path.append((a, b))
    path.reverse()
    return path


def distance(f, g) -> float:
    """Normalized DTW distance ``C[A-1, B-1] / (A + B)``, in the units of the series."""
    C = cost_matrix(abs_difference_matrix(f, g))
    return float(C[-1, -1] / sum(C.shape))


def distance_many(f, curves) -> np.ndarray:
    """DTW distance from ``f`` to each row of ``curves`` (shape ``(K, B)``).

    Same recursion as :func:`distance`; the K candidates are swept together so
    the Python loop runs over cells only once.
    """
    f = _series(f, "f")
    G = np.asarray(curves, dtype=float)
    if G.ndim != 2 or G.shape[1] == 0:
        raise ValueError("curves must be a non-empty (K, B) array")
    A, B = f.size, G.shape[1]
    delta = np.abs(f[None, :, None] - G[:, None, :])  # (K, A, B)
    C = np.empty_like(delta)
    C[:, 0, :] = np.cumsum(delta[:, 0, :], axis=1)
    C[:, :, 0] = np.cumsum(delta[:, :, 0], axis=1)
    for a in range(1, A):
        for b in range(1, B):
            best = np.minimum(np.minimum(C[:, a - 1, b - 1], C[:, a - 1, b]), C[:, a, b - 1])
            C[:, a, b] = delta[:, a, b] + best
    return C[:, -1, -1] / (A + B)
