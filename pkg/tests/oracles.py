"""Independent reference computations used by the tests.

None of these share code with the package paths they check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.integrate import trapezoid


def count_below(a: np.ndarray, x: float) -> int:
    """Number of eigenvalues of symmetric ``a`` below ``x``.

    Counts sign changes in the sequence of leading principal minors of
    ``a - x I`` (each one the characteristic polynomial of a leading
    submatrix evaluated at ``x``), computed as elimination pivots.
    """
    m = np.array(a, dtype=float) - x * np.eye(a.shape[0])
    n = m.shape[0]
    neg = 0
    for k in range(n):
        piv = m[k, k]
        if piv == 0.0:
            piv = 1e-300
        if piv < 0:
            neg += 1
        if k + 1 < n:
            col = m[k + 1 :, k] / piv
            m[k + 1 :, k + 1 :] -= np.outer(col, m[k, k + 1 :])
    return neg


def charpoly_roots(a: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Eigenvalues of a small symmetric matrix by bisection on the minor
    sign-change count, ascending."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    bound = np.max(np.sum(np.abs(a), axis=1)) + 1.0  # Gershgorin
    roots = []
    for k in range(n):
        lo, hi = -bound, bound
        # smallest x with count_below(x) > k
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if count_below(a, mid) > k:
                hi = mid
            else:
                lo = mid
        roots.append(0.5 * (lo + hi))
    return np.array(roots)


def prufer_trees(n: int):
    """Every labeled tree on ``n`` nodes as an edge list (Cayley: n**(n-2))."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for s in seq:
            degree[s] += 1
        edges = []
        for s in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((leaf, s))
            degree[leaf] -= 1
            degree[s] -= 1
        u, v = [i for i in range(n) if degree[i] == 1]
        edges.append((u, v))
        yield edges


def brute_force_mst_weight(d: np.ndarray) -> float:
    n = d.shape[0]
    return min(math.fsum(d[i, j] for i, j in tree) for tree in prufer_trees(n))


def bisect_root(f, lo: float, hi: float, tol: float = 1e-14) -> float:
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def normal_cdf(x):
    return 0.5 * (1.0 + np.vectorize(math.erf)(np.asarray(x) / math.sqrt(2.0)))


def ks_distance(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance by direct ECDF comparison."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    F = cdf(x)
    upper = np.arange(1, n + 1) / n - F
    lower = F - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def mp_cdf_trapezoid(Q: float, x: float, n: int = 200001) -> float:
    """Marchenko-Pastur CDF by a fine substitution-based trapezoid rule."""
    lo = (1 - 1 / math.sqrt(Q)) ** 2
    hi = (1 + 1 / math.sqrt(Q)) ** 2
    x = min(max(x, lo), hi)
    if x <= lo:
        return 0.0
    # lambda = c - r cos(theta) removes the square-root endpoint singularity
    c, r = 0.5 * (lo + hi), 0.5 * (hi - lo)
    th_hi = math.acos(max(-1.0, min(1.0, (c - x) / r)))
    th = np.linspace(0.0, th_hi, n)
    lam = c - r * np.cos(th)
    integrand = Q / (2 * math.pi) * (r * np.sin(th)) ** 2 / lam
    return float(trapezoid(integrand, th))
