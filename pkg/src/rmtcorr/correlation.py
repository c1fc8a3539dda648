"""Equal-time correlation matrices and the random-matrix reference law."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .errors import InvalidQError, NotNormalizedError
from .returns import ReturnPanel

SOURCES = ("empirical", "surrogate", "synthetic", "component")


@dataclass(frozen=True)
class CorrelationMatrix:
    symbols: tuple[str, ...]
    values: np.ndarray
    Q: float
    window: tuple[str, str] | None = None
    source: str = "empirical"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def law(self) -> "RmtLaw":
        return RmtLaw(self.Q)

    def mean_offdiagonal(self) -> float:
        n = self.n
        if n < 2:
            return 0.0
        return float((self.values.sum() - np.trace(self.values)) / (n * (n - 1)))


@dataclass(frozen=True)
class RmtLaw:
    """Eigenvalue law of a correlation matrix built from N uncorrelated
    series of length T, with ``Q = T / N >= 1``.
    """

    Q: float

    def __post_init__(self):
        if not np.isfinite(self.Q) or self.Q < 1:
            raise InvalidQError(f"Q must be >= 1, got {self.Q}")

    @classmethod
    def from_shape(cls, n_stocks: int, n_days: int) -> "RmtLaw":
        return cls(n_days / n_stocks)

    @cached_property
    def lambda_min(self) -> float:
        return (1 - 1 / np.sqrt(self.Q)) ** 2

    @cached_property
    def lambda_max(self) -> float:
        return (1 + 1 / np.sqrt(self.Q)) ** 2

    def density(self, lam):
        return mp_density(self, lam)

    def cdf(self, x):
        return mp_cdf(self, x)


def mp_bounds(Q: float) -> RmtLaw:
    return RmtLaw(Q)


def mp_density(law: RmtLaw, lam):
    """Marchenko-Pastur density; zero outside ``[lambda_min, lambda_max]``."""
    lam = np.asarray(lam, dtype=float)
    lo, hi = law.lambda_min, law.lambda_max
    inside = (lam > lo) & (lam < hi)
    safe = np.where(inside, lam, 1.0)
    val = law.Q / (2 * np.pi) * np.sqrt(np.clip((hi - safe) * (safe - lo), 0, None)) / safe
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def _cdf_scalar(law: RmtLaw, x: float) -> float:
    lo, hi = law.lambda_min, law.lambda_max
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    val, _ = integrate.quad(lambda t: mp_density(law, t), lo, x, epsabs=1e-12, epsrel=1e-12, limit=200)
    return min(max(val, 0.0), 1.0)


def mp_cdf(law: RmtLaw, x):
    x = np.asarray(x, dtype=float)
    out = np.vectorize(lambda v: _cdf_scalar(law, v), otypes=[float])(x)
    return float(out) if out.ndim == 0 else out


def correlation_matrix(
    r: ReturnPanel, source: str = "empirical"
) -> CorrelationMatrix:
    """``C_ij = <r_i r_j>`` over the panel's days."""
    if not r.normalized:
        raise NotNormalizedError("correlation_matrix needs a normalized ReturnPanel")
    N, T = r.values.shape
    if T < 2:
        raise NotNormalizedError(f"need at least 2 return days, got {T}")
    C = r.values @ r.values.T / T
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 1.0)
    np.clip(C, -1.0, 1.0, out=C)
    window = (r.dates[0], r.dates[-1]) if r.dates else None
    return CorrelationMatrix(r.symbols, C, T / N, window, source)


def surrogate_correlation(r: ReturnPanel, seed: int) -> CorrelationMatrix:
    """Correlation matrix after independently permuting each stock's time order."""
    if not r.normalized:
        raise NotNormalizedError("surrogate_correlation needs a normalized ReturnPanel")
    rng = np.random.default_rng(seed)
    shuffled = rng.permuted(r.values, axis=1)
    return correlation_matrix(
        ReturnPanel(r.symbols, r.dates, shuffled, normalized=True, sectors=r.sectors),
        source="surrogate",
    )


def eigenvalue_histogram(eigenvalues, law: RmtLaw, bins: int = 50, upper: float | None = None):
    """Density histogram of ``eigenvalues`` over ``[0, upper]`` next to the
    reference curve evaluated at the bin centres.

    ``upper`` defaults to ``1.2 * lambda_max``. Returns ``(centres, density, mp)``.
    """
    if upper is None:
        upper = 1.2 * law.lambda_max
    eig = np.asarray(eigenvalues, dtype=float)
    counts, edges = np.histogram(eig, bins=bins, range=(0.0, upper))
    width = edges[1] - edges[0]
    density = counts / (eig.size * width)
    centres = 0.5 * (edges[:-1] + edges[1:])
    return centres, density, mp_density(law, centres)
