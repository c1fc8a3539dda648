"""Market / sector / random split of a correlation matrix."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .correlation import RmtLaw
from .errors import NsOutOfRangeError
from .spectral import SpectralDecomposition, classify_spectrum


@dataclass(frozen=True)
class CorrelationComponents:
    market: np.ndarray
    sector: np.ndarray
    random: np.ndarray
    n_s: int

    def total(self) -> np.ndarray:
        return self.market + self.sector + self.random


def decompose(dec: SpectralDecomposition, n_s: int) -> CorrelationComponents:
    """Partial spectral sums: the largest mode, the next ``n_s`` modes, and
    everything else. Each term keeps its eigenvalue weight so the three
    parts add back up to C.
    """
    N = dec.n
    if not 1 <= n_s <= N - 2:
        raise NsOutOfRangeError(f"n_s must lie in [1, {N - 2}], got {n_s}")
    return CorrelationComponents(
        market=dec.reconstruct([0]),
        sector=dec.reconstruct(range(1, n_s + 1)),
        random=dec.reconstruct(range(n_s + 1, N)),
        n_s=n_s,
    )


class NsWarning(UserWarning):
    pass


def suggest_ns(dec: SpectralDecomposition, law: RmtLaw) -> tuple[int, int]:
    """Suggested number of sector modes: eigenvalues above the random bulk,
    less the market mode. Returns ``(suggested, rationale)``.

    The suggestion is floored at 1; when nothing besides the market mode
    clears the bulk a :class:`NsWarning` is emitted because the sector part
    is then pure noise.
    """
    report = classify_spectrum(dec, law)
    rationale = max(0, len(report.deviating_above) - 1)
    if rationale == 0:
        warnings.warn(
            f"{len(report.deviating_above)} eigenvalue(s) above lambda_max={law.lambda_max:.4f}; "
            "sector component will be noise",
            NsWarning,
            stacklevel=2,
        )
    return max(1, rationale), rationale


def offdiagonal(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix)
    return m[np.triu_indices(m.shape[0], k=1)]


def element_distribution(component: np.ndarray, bins: int = 100):
    """Histogram ``(counts, edges)`` of the upper-triangle off-diagonal entries
    over their observed range."""
    x = offdiagonal(component)
    if x.size == 0:
        return np.zeros(bins, dtype=int), np.linspace(-0.5, 0.5, bins + 1)
    lo, hi = float(x.min()), float(x.max())
    if hi - lo <= 1e-15 * max(1.0, abs(lo)):
        # degenerate: one bin centred on the common value
        return np.array([x.size]), np.array([lo - 0.5, lo + 0.5])
    return np.histogram(x, bins=bins, range=(lo, hi))
