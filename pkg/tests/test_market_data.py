import warnings

import numpy as np
import pytest

from rmtcorr.errors import EmptyUniverseError, FillCapExceededError, InsufficientOverlapError, ParseError
from rmtcorr.market_data import (
    DataWarning,
    PriceSeries,
    align_panel,
    load_prices,
    load_sector_map,
    write_long_csv,
    write_wide_csv,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_long_csv_single_series(tmp_path):
    p = write(tmp_path, "p.csv", "date,symbol,close\n2000-01-03,ACME,100.0\n2000-01-04,ACME,110.0\n")
    (s,) = load_prices(p)
    assert s.symbol == "ACME"
    assert len(s) == 2
    assert s.prices.tolist() == [100.0, 110.0]
    assert s.sector == "Miscellaneous"


def test_zero_price_row_rejected_with_warning(tmp_path):
    p = write(
        tmp_path,
        "p.csv",
        "date,symbol,close\n2000-01-03,ACME,100.0\n2000-01-04,ACME,0\n2000-01-05,ACME,101\n",
    )
    with pytest.warns(DataWarning, match=":3:"):
        (s,) = load_prices(p)
    assert s.dates == ("2000-01-03", "2000-01-05")


def test_non_numeric_price_rejected(tmp_path):
    p = write(tmp_path, "p.csv", "date,symbol,close\n2000-01-03,A,abc\n2000-01-04,A,5\n")
    with pytest.warns(DataWarning):
        (s,) = load_prices(p)
    assert len(s) == 1


def test_wide_csv(tmp_path):
    rows = ["date,A,B,C"] + [f"2000-01-0{d},{d},{d + 1},{d + 2}" for d in range(3, 8)]
    p = write(tmp_path, "w.csv", "\n".join(rows) + "\n")
    series = load_prices(p, "wide-csv")
    assert [s.symbol for s in series] == ["A", "B", "C"]
    assert all(len(s) == 5 for s in series)


def test_wide_csv_blank_is_missing(tmp_path):
    p = write(tmp_path, "w.csv", "date,A,B\n2000-01-03,1,2\n2000-01-04,,3\n")
    a, b = load_prices(p, "wide-csv")
    assert len(a) == 1 and len(b) == 2


def test_parse_error_reports_line(tmp_path):
    p = write(tmp_path, "p.csv", "date,symbol,close\n2000-01-03,A,1\nnot-a-date,A,2\n")
    with pytest.raises(ParseError) as exc:
        load_prices(p)
    assert exc.value.line == 3


def test_bad_header(tmp_path):
    p = write(tmp_path, "p.csv", "when,ticker,px\n")
    with pytest.raises(ParseError):
        load_prices(p)


def test_empty_universe(tmp_path):
    p = write(tmp_path, "p.csv", "date,symbol,close\n")
    with pytest.raises(EmptyUniverseError):
        load_prices(p)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_prices(tmp_path / "nope.csv")


def test_sector_column_and_map(tmp_path):
    p = write(tmp_path, "p.csv", "date,symbol,close,sector\n2000-01-03,A,1,Tech\n2000-01-03,B,2,\n")
    m = write(tmp_path, "m.csv", "symbol,sector\nB,Pharma\n")
    a, b = load_prices(p, sector_map=load_sector_map(m))
    assert (a.sector, b.sector) == ("Tech", "Pharma")


def series(sym, dates, prices):
    return PriceSeries(sym, tuple(dates), np.array(prices, dtype=float))


def test_identical_dates_no_fill():
    d = ["2000-01-03", "2000-01-04", "2000-01-05"]
    panel = align_panel([series("A", d, [1, 2, 3]), series("B", d, [4, 5, 6])])
    assert not panel.fill_mask.any()
    assert panel.prices.shape == (2, 3)


def test_forward_fill_union():
    d1, d2, d3 = "2000-01-03", "2000-01-04", "2000-01-05"
    a = series("A", [d1, d2, d3], [1, 2, 3])
    b = series("B", [d1, d3], [10, 30])
    panel = align_panel([a, b], "union", fill_cap=0.5)
    assert panel.prices[1].tolist() == [10, 10, 30]
    assert panel.fill_mask[1].tolist() == [False, True, False]
    assert not panel.fill_mask[0].any()


def test_intersection_calendar():
    a = series("A", ["2000-01-03", "2000-01-04", "2000-01-05"], [1, 2, 3])
    b = series("B", ["2000-01-03", "2000-01-05"], [10, 30])
    panel = align_panel([a, b], "intersection")
    assert panel.dates == ("2000-01-03", "2000-01-05")
    assert not panel.fill_mask.any()


def test_fill_cap_exceeded_names_symbol():
    dates = [f"2000-{m:02d}-{d:02d}" for m in (1, 2, 3, 4) for d in range(1, 26)]  # 100 dates
    a = series("A", dates, np.arange(1, 101))
    keep = [k for k in range(100) if k % 10 != 5]  # B misses 10%
    b = series("B", [dates[k] for k in keep], np.arange(1, 91))
    with pytest.raises(FillCapExceededError) as exc:
        align_panel([a, b], fill_cap=0.06)
    assert list(exc.value.symbols) == ["B"]
    assert exc.value.symbols["B"] == pytest.approx(0.10)
    # 10% missing is fine once the cap allows it
    assert align_panel([a, b], fill_cap=0.10).fill_fraction()[1] == pytest.approx(0.10)


def test_leading_gap_excludes_symbol():
    d = ["2000-01-03", "2000-01-04", "2000-01-05", "2000-01-06"]
    a = series("A", d, [1, 2, 3, 4])
    b = series("B", d, [1, 2, 3, 4])
    late = series("C", d[1:], [5, 6, 7])
    panel = align_panel([a, b, late], fill_cap=0.5)
    assert panel.symbols == ("A", "B")
    assert panel.excluded == ("C",)


def test_insufficient_overlap():
    a = series("A", ["2000-01-03"], [1])
    with pytest.raises(InsufficientOverlapError):
        align_panel([a])
    with pytest.raises(InsufficientOverlapError):
        align_panel([a, series("B", ["2000-01-03"], [2])])


def test_align_is_idempotent():
    d1, d2, d3 = "2000-01-03", "2000-01-04", "2000-01-05"
    panel = align_panel(
        [series("A", [d1, d2, d3], [1, 2, 3]), series("B", [d1, d3], [10, 30])], fill_cap=0.5
    )
    again = align_panel(panel.to_series(), fill_cap=0.5)
    np.testing.assert_array_equal(again.prices, panel.prices)
    assert again.dates == panel.dates
    assert not again.fill_mask.any()


def test_fill_fraction_within_cap():
    rng = np.random.default_rng(0)
    dates = [f"2001-{m:02d}-{d:02d}" for m in range(1, 13) for d in range(1, 28)]
    out = []
    for s in range(5):
        keep = [0] + [k for k in range(1, len(dates)) if rng.random() > 0.03]
        out.append(series(f"S{s}", [dates[k] for k in keep], rng.uniform(1, 2, len(keep))))
    try:
        panel = align_panel(out)
    except FillCapExceededError:
        pytest.skip("random draw exceeded the cap")
    assert np.all(panel.fill_fraction() <= 0.06)


@pytest.mark.parametrize("writer,fmt", [(write_long_csv, "long-csv"), (write_wide_csv, "wide-csv")])
def test_csv_round_trip(tmp_path, writer, fmt):
    d = ["2000-01-03", "2000-01-04"]
    panel = align_panel([series("A", d, [1.5, 2.25]), series("B", d, [3.0, 1e-3])])
    writer(tmp_path / "x.csv", panel)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        again = align_panel(load_prices(tmp_path / "x.csv", fmt))
    np.testing.assert_array_equal(again.prices, panel.prices)
