"""Independent reference computations used by the tests.

Nothing here imports from ``worg``.
"""

import math
from fractions import Fraction

import mpmath


def monotone_paths(A, B):
    """Every lattice path from (0, 0) to (A-1, B-1) with unit steps right, down or diagonal."""

    def walk(a, b):
        if (a, b) == (A - 1, B - 1):
            yield [(a, b)]
            return
        for da, db in ((1, 0), (0, 1), (1, 1)):
            na, nb = a + da, b + db
            if na < A and nb < B:
                for rest in walk(na, nb):
                    yield [(a, b)] + rest

    yield from walk(0, 0)


def brute_force_dtw(f, g):
    """Min over all monotone paths of the summed |f[a] - g[b]|, over (A + B).

    Exact rational arithmetic when the inputs are integers.
    """
    best = None
    for path in monotone_paths(len(f), len(g)):
        cost = sum(abs(f[a] - g[b]) for a, b in path)
        if best is None or cost < best:
            best = cost
    return Fraction(best, len(f) + len(g)) if isinstance(best, int) else best / (len(f) + len(g))


def poisson_row(lam, lo, hi, dps=50):
    """Renormalized Poisson masses on [lo, hi] at high precision."""
    mpmath.mp.dps = dps
    lam = mpmath.mpf(lam)
    masses = [lam**n / mpmath.factorial(n) * mpmath.e ** (-lam) for n in range(lo, hi + 1)]
    total = mpmath.fsum(masses)
    return [float(m / total) for m in masses]


def matern32(r, ell, s2=1.0):
    z = math.sqrt(3.0) * r / ell
    return s2 * (1 + z) * math.exp(-z)
