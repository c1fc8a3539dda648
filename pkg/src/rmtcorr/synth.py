"""Synthetic market: returns driven by a market factor plus sector factors.

Each stock follows ``x_i(t) = b_i m(t) f(t) + g_s g_s(t) + sigma e_i(t)`` with
independent unit Gaussian factors, where ``m(t)`` is an optional per-day
scaling of the market factor. The returned panel is standardized, so it
feeds straight into the correlation analysis while the population
correlation matrix is known exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidSpecError
from .market_data import DEFAULT_SECTOR, PricePanel, business_days
from .returns import ReturnPanel, normalize


@dataclass(frozen=True)
class FactorModelSpec:
    n_stocks: int
    n_days: int
    market_beta: float | Sequence[float] = 1.0
    sectors: Sequence[tuple[int, float]] = ()
    idiosyncratic_sigma: float = 1.0
    seed: int = 0
    market_scale: Sequence[float] | None = None  # per-day multiplier of the market factor
    daily_vol: float = 0.02  # scale of the raw log returns
    start_date: str = "2000-01-03"

    def betas(self) -> np.ndarray:
        b = np.asarray(self.market_beta, dtype=float)
        return np.full(self.n_stocks, float(b)) if b.ndim == 0 else b

    def labels(self) -> list[str]:
        out = []
        for s, (count, _) in enumerate(self.sectors):
            out += [f"Sector{s + 1}"] * count
        return out + [DEFAULT_SECTOR] * (self.n_stocks - len(out))

    def loadings(self) -> np.ndarray:
        """N x (1 + n_sectors) loading matrix; column 0 is the market."""
        L = np.zeros((self.n_stocks, 1 + len(self.sectors)))
        L[:, 0] = self.betas()
        row = 0
        for s, (count, gamma) in enumerate(self.sectors):
            L[row : row + count, 1 + s] = gamma
            row += count
        return L

    def validate(self) -> None:
        if self.n_stocks < 2 or self.n_days < 2:
            raise InvalidSpecError("need n_stocks >= 2 and n_days >= 2")
        b = np.asarray(self.market_beta, dtype=float)
        if b.ndim > 1 or (b.ndim == 1 and b.size != self.n_stocks):
            raise InvalidSpecError("market_beta must be a scalar or one value per stock")
        counts = [c for c, _ in self.sectors]
        if any(c < 1 for c in counts) or sum(counts) > self.n_stocks:
            raise InvalidSpecError("sector member counts must be positive and sum to <= n_stocks")
        if not np.all(np.isfinite(self.loadings())):
            raise InvalidSpecError("loadings must be finite")
        if not (np.isfinite(self.idiosyncratic_sigma) and self.idiosyncratic_sigma >= 0):
            raise InvalidSpecError("idiosyncratic_sigma must be finite and non-negative")
        if self.market_scale is not None and len(self.market_scale) != self.n_days:
            raise InvalidSpecError("market_scale needs one entry per day")
        if np.any(self.population_variance() <= 0):
            raise InvalidSpecError("every stock needs positive variance")
        if self.daily_vol <= 0:
            raise InvalidSpecError("daily_vol must be positive")

    def _mean_market_power(self) -> float:
        if self.market_scale is None:
            return 1.0
        return float(np.mean(np.square(self.market_scale)))

    def population_covariance(self) -> np.ndarray:
        L = self.loadings()
        L2 = L.copy()
        L2[:, 0] *= np.sqrt(self._mean_market_power())
        return L2 @ L2.T + self.idiosyncratic_sigma**2 * np.eye(self.n_stocks)

    def population_variance(self) -> np.ndarray:
        return np.diag(self.population_covariance())

    def population_correlation(self) -> np.ndarray:
        cov = self.population_covariance()
        d = np.sqrt(np.diag(cov))
        return cov / np.outer(d, d)


@dataclass(frozen=True)
class ExpectedSpectrum:
    """Population-level eigenvalue sketch used as the oracle for analyses."""

    lambda0: float
    sector_eigenvalues: tuple[float, ...]
    population_eigenvalues: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SynthResult:
    panel: ReturnPanel  # normalized
    raw: ReturnPanel  # raw log returns (daily_vol scale)
    labels: dict[str, str]
    expected: ExpectedSpectrum
    start_date: str  # date of the initial price


def expected_spectrum(spec: FactorModelSpec) -> ExpectedSpectrum:
    # numpy's LAPACK path, kept independent of the in-house solver it checks
    w = np.sort(np.linalg.eigvalsh(spec.population_correlation()))[::-1]
    k = len(spec.sectors)
    return ExpectedSpectrum(float(w[0]), tuple(float(x) for x in w[1 : 1 + k]), w)


def one_factor_lambda0(n: int, rho: float) -> float:
    """Top eigenvalue of ``(1 - rho) I + rho J``."""
    return 1 + (n - 1) * rho


def generate(spec: FactorModelSpec) -> SynthResult:
    spec.validate()
    N, T = spec.n_stocks, spec.n_days
    rng = np.random.default_rng(spec.seed)
    L = spec.loadings()
    factors = rng.standard_normal((L.shape[1], T))
    noise = rng.standard_normal((N, T))
    if spec.market_scale is not None:
        factors[0] *= np.asarray(spec.market_scale, dtype=float)
    x = L @ factors + spec.idiosyncratic_sigma * noise
    x *= spec.daily_vol / np.sqrt(spec.population_variance())[:, None]

    dates = business_days(spec.start_date, T + 1)
    symbols = tuple(f"S{i:03d}" for i in range(N))
    labels = spec.labels()
    raw = ReturnPanel(symbols, tuple(dates[1:]), x, sectors=tuple(labels))
    return SynthResult(
        panel=normalize(raw),
        raw=raw,
        labels=dict(zip(symbols, labels)),
        expected=expected_spectrum(spec),
        start_date=dates[0],
    )


def price_panel_from_returns(
    panel: ReturnPanel, initial_price: float = 100.0, initial_date: str = "t0"
) -> PricePanel:
    """Compound log returns into prices: ``P(t+1) = P(t) exp(R(t))``."""
    if initial_price <= 0:
        raise ValueError("initial_price must be positive")
    R = np.asarray(panel.values, dtype=float)
    if not np.all(np.isfinite(R)):
        raise ValueError("returns must be finite")
    logp = np.log(initial_price) + np.concatenate(
        [np.zeros((R.shape[0], 1)), np.cumsum(R, axis=1)], axis=1
    )
    sectors = panel.sectors or (DEFAULT_SECTOR,) * R.shape[0]
    return PricePanel(
        symbols=panel.symbols,
        sectors=tuple(sectors),
        dates=(initial_date, *panel.dates),
        prices=np.exp(logp),
        fill_mask=np.zeros((R.shape[0], R.shape[1] + 1), dtype=bool),
    )


# Planted market with a dominant market mode (top eigenvalue near 46 for
# N = 201, T = 2607) and five small sectors of graded strength.
PLANTED_SECTOR_SIZE = 12
PLANTED_SECTOR_LOADINGS = (0.4, 0.6, 0.9, 1.35, 2.025)
PLANTED_MARKET_BETA = 0.58


def planted_market_spec(
    seed: int = 0,
    n_stocks: int = 201,
    n_days: int = 2607,
    market_beta: float = PLANTED_MARKET_BETA,
    sector_size: int = PLANTED_SECTOR_SIZE,
    sector_loadings: Sequence[float] = PLANTED_SECTOR_LOADINGS,
) -> FactorModelSpec:
    return FactorModelSpec(
        n_stocks=n_stocks,
        n_days=n_days,
        market_beta=market_beta,
        sectors=tuple((sector_size, g) for g in sector_loadings),
        idiosyncratic_sigma=1.0,
        seed=seed,
    )
