"""Loading and aligning daily closing-price series."""

from __future__ import annotations

import csv
import datetime as dt
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyUniverseError,
    FillCapExceededError,
    InsufficientOverlapError,
    ParseError,
)

DEFAULT_SECTOR = "Miscellaneous"
DEFAULT_FILL_CAP = 0.06


class DataWarning(UserWarning):
    """A row of input data was rejected."""


@dataclass(frozen=True)
class PriceSeries:
    symbol: str
    dates: tuple[str, ...]
    prices: np.ndarray
    sector: str = DEFAULT_SECTOR

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("symbol must be non-empty")
        prices = np.asarray(self.prices, dtype=float)
        if prices.shape != (len(self.dates),):
            raise ValueError(f"{self.symbol}: {len(self.dates)} dates but {prices.size} prices")
        if np.any(~(prices > 0)):
            raise ValueError(f"{self.symbol}: prices must be positive")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError(f"{self.symbol}: dates must be strictly increasing")
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "sector", self.sector or DEFAULT_SECTOR)

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True)
class PricePanel:
    symbols: tuple[str, ...]
    sectors: tuple[str, ...]
    dates: tuple[str, ...]
    prices: np.ndarray  # N x T
    fill_mask: np.ndarray  # N x T, True where forward-filled
    excluded: tuple[str, ...] = field(default=())

    @property
    def shape(self) -> tuple[int, int]:
        return self.prices.shape

    def fill_fraction(self) -> np.ndarray:
        return self.fill_mask.mean(axis=1)

    def sector_map(self) -> dict[str, str]:
        return dict(zip(self.symbols, self.sectors))

    def to_series(self) -> list[PriceSeries]:
        return [
            PriceSeries(sym, self.dates, self.prices[i].copy(), sec)
            for i, (sym, sec) in enumerate(zip(self.symbols, self.sectors))
        ]


def _check_date(text: str, line: int) -> str:
    text = text.strip()
    try:
        dt.date.fromisoformat(text)
    except ValueError:
        raise ParseError(f"invalid ISO-8601 date {text!r}", line) from None
    return text


def _parse_price(text: str, line: int, symbol: str, path: Path) -> float | None:
    try:
        value = float(text)
    except ValueError:
        value = math.nan
    if not math.isfinite(value) or value <= 0:
        warnings.warn(
            f"{path}:{line}: rejected price {text!r} for {symbol}", DataWarning, stacklevel=3
        )
        return None
    return value


def load_sector_map(path: str | Path) -> dict[str, str]:
    """Read a ``symbol,sector`` CSV into a dict."""
    path = Path(path)
    out: dict[str, str] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["symbol", "sector"]:
            raise ParseError("sector map header must be 'symbol,sector'", 1)
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise ParseError("expected 2 columns", lineno)
            out[row[0].strip()] = row[1].strip() or DEFAULT_SECTOR
    return out


def _build_series(
    obs: dict[str, dict[str, float]], sectors: dict[str, str]
) -> list[PriceSeries]:
    out = []
    for sym in sorted(obs):
        if not obs[sym]:
            continue
        dates = tuple(sorted(obs[sym]))
        prices = np.array([obs[sym][d] for d in dates])
        out.append(PriceSeries(sym, dates, prices, sectors.get(sym, DEFAULT_SECTOR)))
    if not out:
        raise EmptyUniverseError("no valid price observations")
    return out


def _load_long(path: Path, reader) -> list[PriceSeries]:
    header = next(reader, None)
    cols = [h.strip().lower() for h in header] if header else []
    if cols[:3] != ["date", "symbol", "close"]:
        raise ParseError("long CSV header must start with 'date,symbol,close'", 1)
    has_sector = len(cols) > 3 and cols[3] == "sector"
    obs: dict[str, dict[str, float]] = {}
    sectors: dict[str, str] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 3:
            raise ParseError(f"expected at least 3 columns, got {len(row)}", lineno)
        date = _check_date(row[0], lineno)
        sym = row[1].strip()
        if not sym:
            raise ParseError("empty symbol", lineno)
        series = obs.setdefault(sym, {})
        if has_sector and len(row) > 3 and row[3].strip():
            sectors[sym] = row[3].strip()
        price = _parse_price(row[2], lineno, sym, path)
        if price is None:
            continue
        if date in series:
            raise ParseError(f"duplicate date {date} for {sym}", lineno)
        series[date] = price
    return _build_series(obs, sectors)


def _load_wide(path: Path, reader) -> list[PriceSeries]:
    header = next(reader, None)
    if not header or header[0].strip().lower() != "date" or len(header) < 2:
        raise ParseError("wide CSV header must be 'date,SYM1,SYM2,...'", 1)
    symbols = [h.strip() for h in header[1:]]
    if any(not s for s in symbols) or len(set(symbols)) != len(symbols):
        raise ParseError("empty or duplicate symbol column", 1)
    obs: dict[str, dict[str, float]] = {s: {} for s in symbols}
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) > len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", lineno)
        date = _check_date(row[0], lineno)
        if date in seen:
            raise ParseError(f"duplicate date {date}", lineno)
        seen.add(date)
        for sym, cell in zip(symbols, row[1:]):
            if not cell.strip():
                continue  # blank cell = missing
            price = _parse_price(cell, lineno, sym, path)
            if price is not None:
                obs[sym][date] = price
    return _build_series(obs, {})


def load_prices(
    path: str | Path,
    format: str = "long-csv",
    sector_map: dict[str, str] | None = None,
) -> list[PriceSeries]:
    """Read closing prices from a long (``date,symbol,close[,sector]``) or
    wide (``date,SYM1,...``) CSV file.

    Rows with non-numeric or non-positive prices are dropped with a
    :class:`DataWarning`. Structural problems raise :class:`ParseError`.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        if format == "long-csv":
            series = _load_long(path, reader)
        elif format == "wide-csv":
            series = _load_wide(path, reader)
        else:
            raise ValueError(f"unknown format {format!r}")
    if sector_map:
        series = apply_sectors(series, sector_map)
    return series


def align_panel(
    series: Sequence[PriceSeries],
    calendar: str = "union",
    fill_cap: float = DEFAULT_FILL_CAP,
) -> PricePanel:
    """Align series onto a common date axis.

    With the ``union`` calendar a missing date repeats the previous close
    (no trade that day). A symbol with no observation on the first calendar
    date cannot be filled and is excluded; its name is kept in
    ``PricePanel.excluded``.
    """
    if len(series) < 2:
        raise InsufficientOverlapError(f"need at least 2 series, got {len(series)}")
    if calendar == "union":
        dates = sorted(set().union(*(s.dates for s in series)))
    elif calendar == "intersection":
        dates = sorted(set.intersection(*(set(s.dates) for s in series)))
    else:
        raise ValueError(f"unknown calendar {calendar!r}")
    if len(dates) < 2:
        raise InsufficientOverlapError(f"calendar has {len(dates)} dates")

    index = {d: k for k, d in enumerate(dates)}
    T = len(dates)
    rows, masks, kept, excluded = [], [], [], []
    for s in series:
        row = np.full(T, np.nan)
        for d, p in zip(s.dates, s.prices):
            k = index.get(d)
            if k is not None:
                row[k] = p
        mask = np.isnan(row)
        if mask[0]:
            excluded.append(s.symbol)
            continue
        # forward fill
        idx = np.where(mask, 0, np.arange(T))
        np.maximum.accumulate(idx, out=idx)
        rows.append(row[idx])
        masks.append(mask)
        kept.append(s)

    if len(kept) < 2:
        raise InsufficientOverlapError(
            f"only {len(kept)} series cover the calendar start; excluded: {', '.join(excluded)}"
        )
    fill_mask = np.array(masks)
    frac = fill_mask.mean(axis=1)
    over = {s.symbol: float(f) for s, f in zip(kept, frac) if f > fill_cap}
    if over:
        raise FillCapExceededError(over, fill_cap)
    return PricePanel(
        symbols=tuple(s.symbol for s in kept),
        sectors=tuple(s.sector for s in kept),
        dates=tuple(dates),
        prices=np.array(rows),
        fill_mask=fill_mask,
        excluded=tuple(excluded),
    )


def write_long_csv(path: str | Path, panel: PricePanel) -> None:
    """Write a panel in the long ingest format (``date,symbol,close,sector``)."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "symbol", "close", "sector"])
        for i, sym in enumerate(panel.symbols):
            for k, d in enumerate(panel.dates):
                w.writerow([d, sym, repr(float(panel.prices[i, k])), panel.sectors[i]])


def write_wide_csv(path: str | Path, panel: PricePanel) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *panel.symbols])
        for k, d in enumerate(panel.dates):
            w.writerow([d, *(repr(float(p)) for p in panel.prices[:, k])])


def business_days(start: str, count: int) -> list[str]:
    """``count`` consecutive weekday dates starting at or after ``start``."""
    day = dt.date.fromisoformat(start)
    out: list[str] = []
    while len(out) < count:
        if day.weekday() < 5:
            out.append(day.isoformat())
        day += dt.timedelta(days=1)
    return out


def apply_sectors(series: Iterable[PriceSeries], sector_map: dict[str, str]) -> list[PriceSeries]:
    return [PriceSeries(s.symbol, s.dates, s.prices, sector_map.get(s.symbol, s.sector)) for s in series]
