"""Stability of the correlation structure over time: eigenvector overlaps
between lagged windows and rolling tracking of the market mode."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationMatrix, correlation_matrix
from .errors import PanelTooShortError, WindowOutOfBoundsError
from .returns import ReturnPanel, normalize
from .spectral import SpectralDecomposition, eigendecompose

# trading-day equivalents of calendar spans
SIX_MONTHS = 125
ONE_YEAR = 250
TWO_YEARS = 500
ONE_MONTH = 21


@dataclass(frozen=True)
class WindowSpec:
    length: int
    step: int

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("window length must be >= 2")
        if self.step < 1:
            raise ValueError("window lag/step must be >= 1")


def window_correlation(panel: ReturnPanel, start: int, length: int) -> CorrelationMatrix:
    """Correlation matrix of ``panel`` days ``[start, start + length)``,
    renormalizing each stock within the window."""
    if start < 0 or length < 2 or start + length > panel.n_days:
        raise WindowOutOfBoundsError(
            f"window [{start}, {start + length}) outside panel of {panel.n_days} days"
        )
    return correlation_matrix(normalize(panel.window(start, length)))


@dataclass(frozen=True)
class OverlapMatrix:
    values: np.ndarray  # signed, k x k
    window_a: tuple[str, str]
    window_b: tuple[str, str]
    tau: int
    eigenvalues_a: np.ndarray
    eigenvalues_b: np.ndarray

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def diagonal(self) -> np.ndarray:
        return np.abs(np.diag(self.values))


def overlap_matrix(panel: ReturnPanel, t: int, T: int, tau: int, k: int = 10) -> OverlapMatrix:
    """``O = D_A D_B^T`` where the rows of ``D`` are the top-``k`` unit
    eigenvectors of windows ``[t, t+T)`` and ``[t+tau, t+tau+T)``."""
    if tau < 0:
        raise WindowOutOfBoundsError("tau must be non-negative")
    if not 1 <= k <= panel.n_stocks:
        raise WindowOutOfBoundsError(f"k={k} must lie in [1, {panel.n_stocks}]")
    ca = window_correlation(panel, t, T)
    cb = ca if tau == 0 else window_correlation(panel, t + tau, T)
    da = eigendecompose(ca)
    db = da if tau == 0 else eigendecompose(cb)
    D_a, D_b = da.eigenvectors[:k], db.eigenvectors[:k]
    return OverlapMatrix(
        values=D_a @ D_b.T,
        window_a=ca.window,
        window_b=cb.window,
        tau=tau,
        eigenvalues_a=da.eigenvalues[:k],
        eigenvalues_b=db.eigenvalues[:k],
    )


@dataclass(frozen=True)
class MarketModeTrack:
    symbols: tuple[str, ...]
    windows: tuple[tuple[str, str], ...]
    starts: tuple[int, ...]
    contributions: np.ndarray  # N x M, sign-fixed u_0 per window
    lambda0: np.ndarray
    mean_correlation: np.ndarray
    consistency_rank: tuple[str, ...]

    @property
    def n_windows(self) -> int:
        return len(self.windows)

    def top(self, n: int = 50) -> tuple[str, ...]:
        return self.consistency_rank[:n]


def n_windows(n_days: int, length: int, step: int) -> int:
    return (n_days - length) // step + 1


def rolling_market_mode(
    panel: ReturnPanel, T: int = SIX_MONTHS, dt: int = ONE_MONTH
) -> MarketModeTrack:
    """Largest eigenvalue and its eigenvector for each window of ``T`` days,
    consecutive windows shifted by ``dt`` days.

    Stocks are ranked by mean ``|u_0,i|`` across windows (ties by symbol).
    """
    WindowSpec(T, dt)
    if panel.n_days < T:
        raise PanelTooShortError(f"panel has {panel.n_days} days, window needs {T}")
    M = n_windows(panel.n_days, T, dt)
    cols, lam0, meanc, windows, starts = [], [], [], [], []
    for m in range(M):
        start = m * dt
        C = window_correlation(panel, start, T)
        dec: SpectralDecomposition = eigendecompose(C)
        cols.append(dec.eigenvectors[0])
        lam0.append(dec.eigenvalues[0])
        meanc.append(C.mean_offdiagonal())
        windows.append(C.window)
        starts.append(start)
    contrib = np.array(cols).T
    score = np.abs(contrib).mean(axis=1)
    rank = sorted(range(len(panel.symbols)), key=lambda i: (-score[i], panel.symbols[i]))
    return MarketModeTrack(
        symbols=panel.symbols,
        windows=tuple(windows),
        starts=tuple(starts),
        contributions=contrib,
        lambda0=np.array(lam0),
        mean_correlation=np.array(meanc),
        consistency_rank=tuple(panel.symbols[i] for i in rank),
    )


@dataclass(frozen=True)
class Lambda0Series:
    rows: tuple[tuple[tuple[str, str], float, float], ...]
    pearson: float


def lambda0_series(track: MarketModeTrack) -> Lambda0Series:
    """Per-window largest eigenvalue next to the mean off-diagonal
    correlation, with the Pearson correlation between the two series."""
    rows = tuple(zip(track.windows, map(float, track.lambda0), map(float, track.mean_correlation)))
    if track.n_windows < 2 or np.std(track.lambda0) == 0 or np.std(track.mean_correlation) == 0:
        pearson = float("nan")
    else:
        pearson = float(np.corrcoef(track.lambda0, track.mean_correlation)[0, 1])
    return Lambda0Series(rows, pearson)
