"""Log returns and their per-stock standardization."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import LagTooLargeError, ZeroVolatilityError
from .market_data import DEFAULT_SECTOR, PricePanel


@dataclass(frozen=True)
class ReturnPanel:
    """N x T' matrix of returns with symbol and date axes.

    ``dates[k]`` is the date on which return ``k`` is realized (the later of
    the two prices). When ``normalized`` is set, ``mean`` and ``sigma`` hold
    the per-stock statistics that were removed.
    """

    symbols: tuple[str, ...]
    dates: tuple[str, ...]
    values: np.ndarray
    normalized: bool = False
    mean: np.ndarray | None = None
    sigma: np.ndarray | None = None
    sectors: tuple[str, ...] | None = None
    lag: int = 1

    @property
    def n_stocks(self) -> int:
        return self.values.shape[0]

    @property
    def n_days(self) -> int:
        return self.values.shape[1]

    def sector_map(self) -> dict[str, str]:
        sectors = self.sectors or (DEFAULT_SECTOR,) * len(self.symbols)
        return dict(zip(self.symbols, sectors))

    def window(self, start: int, length: int) -> "ReturnPanel":
        """Raw (un-renormalized) slice of ``length`` days starting at ``start``."""
        return replace(
            self,
            dates=self.dates[start : start + length],
            values=self.values[:, start : start + length],
        )

    def select(self, idx) -> "ReturnPanel":
        idx = list(idx)
        return replace(
            self,
            symbols=tuple(self.symbols[i] for i in idx),
            sectors=None if self.sectors is None else tuple(self.sectors[i] for i in idx),
            values=self.values[idx],
            mean=None if self.mean is None else self.mean[idx],
            sigma=None if self.sigma is None else self.sigma[idx],
        )


def log_returns(panel: PricePanel, lag: int = 1) -> ReturnPanel:
    if lag < 1:
        raise ValueError("lag must be a positive integer")
    T = panel.prices.shape[1]
    if lag >= T:
        raise LagTooLargeError(f"lag {lag} >= panel length {T}")
    logp = np.log(panel.prices)
    return ReturnPanel(
        symbols=panel.symbols,
        dates=panel.dates[lag:],
        values=logp[:, lag:] - logp[:, :-lag],
        sectors=panel.sectors,
        lag=lag,
    )


def standardize(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rowwise (x - mean) / sigma with the population (1/T) variance.

    Returns ``(normalized, mean, sigma)``; rows with zero volatility get
    ``sigma == 0`` and are left to the caller.
    """
    values = np.asarray(values, dtype=float)
    mean = values.mean(axis=1)
    centred = values - mean[:, None]
    sigma = np.sqrt((centred**2).mean(axis=1))
    scale = np.abs(values).max(axis=1, initial=0.0)
    # constant rows give sigma at rounding level, not exactly zero
    degenerate = sigma <= 1e-13 * np.maximum(scale, 1e-300)
    sigma = np.where(degenerate, 0.0, sigma)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = centred / sigma[:, None]
    return out, mean, sigma


def normalize(returns: ReturnPanel) -> ReturnPanel:
    """Subtract each stock's mean return and divide by its volatility."""
    out, mean, sigma = standardize(returns.values)
    bad = [s for s, sd in zip(returns.symbols, sigma) if sd == 0]
    if bad:
        raise ZeroVolatilityError(bad)
    return replace(returns, values=out, normalized=True, mean=mean, sigma=sigma)


def write_returns_csv(path: str | Path, panel: ReturnPanel) -> None:
    """Wide CSV: one row per date, one column per symbol."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *panel.symbols])
        for k, d in enumerate(panel.dates):
            w.writerow([d, *(repr(float(x)) for x in panel.values[:, k])])
