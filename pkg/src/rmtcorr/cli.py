"""Command line front end.

Every subcommand starts from closing prices (``--input``), runs the chain up
to its own stage and writes CSV files plus ``manifest.json`` into the output
directory. Parameters come from built-in defaults, then an optional INI
config file (``--config``, section ``[run]``), then command line flags.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .correlation import (
    CorrelationMatrix,
    RmtLaw,
    correlation_matrix,
    eigenvalue_histogram,
    mp_density,
    surrogate_correlation,
)
from .decomposition import CorrelationComponents, NsWarning, decompose, element_distribution, suggest_ns
from .errors import ConfigError, IO_EXIT_CODE, RmtError
from .market_data import (
    PricePanel,
    align_panel,
    load_prices,
    load_sector_map,
    write_long_csv,
    write_wide_csv,
)
from .network import (
    MarketGraph,
    export_graph,
    mantegna_distance,
    minimum_spanning_tree,
    sweep_threshold,
    threshold_network,
)
from .returns import ReturnPanel, log_returns, normalize
from .spectral import (
    SpectralDecomposition,
    classify_spectrum,
    eigendecompose,
    ipr_profile,
    porter_thomas_test,
    sector_composition,
)
from .synth import FactorModelSpec, generate, planted_market_spec, price_panel_from_returns
from .temporal import lambda0_series, overlap_matrix, rolling_market_mode

OUTPUT_ENV = "RMTCORR_OUTPUT_DIR"
DEFAULT_OUTPUT = "rmtcorr-out"
GRAPH_FORMATS = {"pajek-net": ".net", "dot": ".dot", "edge-csv": ".csv"}


@dataclass
class RunConfig:
    input: str = ""
    format: str = "long-csv"
    sector_map: str = ""
    calendar: str = "union"
    fill_cap: float = 0.06
    start_date: str = ""
    end_date: str = ""
    lag: int = 1
    bins: int = 50
    seed: int = 0
    ns: str = ""  # integer or "auto"; required by decompose/pipeline
    cth: str = "sweep"  # threshold value or "sweep"
    cth_grid: str = "0:0.5:0.01"  # start:stop:step, stop exclusive
    kind: str = "mst"
    graph_format: str = "all"
    T: int = 125
    dt: int = 21
    tau: int = 125
    k: int = 10
    t: int = 0
    top: int = 50
    # synth
    preset: str = "planted"
    n_stocks: int = 201
    n_days: int = 2607
    beta: float = 0.58
    sectors: str = ""  # "count:loading,..." overrides the preset's sectors
    sigma: float = 1.0
    initial_price: float = 100.0
    out: str = ""

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        if not parser.read(path):
            raise ConfigError(f"cannot read config file {path}")
        if not parser.has_section("run"):
            raise ConfigError(f"{path}: missing [run] section")
        return cls().updated(dict(parser["run"]))

    def updated(self, values: dict) -> "RunConfig":
        types = {f.name: f.type for f in fields(self)}
        out = dataclasses.replace(self)
        for key, raw in values.items():
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            kind = types[key]
            try:
                value = {"int": int, "float": float}.get(kind, str)(raw)
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
            setattr(out, key, value)
        return out

    def to_ini(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        parser["run"] = {f.name: str(getattr(self, f.name)) for f in fields(self)}
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


# -- output helpers -----------------------------------------------------------


def _num(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Outputs:
    """Writes artifacts under one directory and remembers them for the manifest."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []
        self.results: dict = {}

    def path(self, name: str) -> Path:
        if name not in self.files:
            self.files.append(name)
        return self.root / name

    def csv(self, name: str, header: list[str], rows: Iterable[Iterable]) -> None:
        with self.path(name).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])

    def matrix(self, name: str, symbols, values: np.ndarray) -> None:
        self.csv(name, ["symbol", *symbols], ([s, *map(float, row)] for s, row in zip(symbols, values)))

    def check(self) -> None:
        missing = [f for f in self.files if not (self.root / f).is_file() or (self.root / f).stat().st_size == 0]
        if missing:
            raise RmtError(f"artifacts missing or empty: {', '.join(missing)}")

    def manifest(self, subcommand: str, cfg: RunConfig, inputs: list[str]) -> None:
        self.check()
        doc = {
            "tool": "rmtcorr",
            "version": __version__,
            "subcommand": subcommand,
            "seed": cfg.seed,
            "parameters": {k: v for k, v in cfg.as_dict().items() if k != "out"},
            "inputs": {p: _sha256(Path(p)) for p in inputs if p},
            "outputs": {f: _sha256(self.root / f) for f in sorted(self.files)},
            "results": self.results,
        }
        (self.root / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# -- stages -------------------------------------------------------------------


def _inputs(cfg: RunConfig) -> list[str]:
    return [cfg.input, cfg.sector_map]


def load_panel(cfg: RunConfig) -> PricePanel:
    if not cfg.input:
        raise ConfigError("--input is required")
    sectors = load_sector_map(cfg.sector_map) if cfg.sector_map else None
    series = load_prices(cfg.input, cfg.format, sectors)
    if cfg.start_date or cfg.end_date:
        lo, hi = cfg.start_date or "", cfg.end_date or "9999-99-99"
        trimmed = []
        for s in series:
            keep = [k for k, d in enumerate(s.dates) if lo <= d <= hi]
            if keep:
                trimmed.append(type(s)(s.symbol, tuple(s.dates[k] for k in keep), s.prices[keep], s.sector))
        series = trimmed
    return align_panel(series, cfg.calendar, cfg.fill_cap)


def load_returns(cfg: RunConfig) -> ReturnPanel:
    return normalize(log_returns(load_panel(cfg), cfg.lag))


def _write_ingest(out: Outputs, panel: PricePanel) -> None:
    write_wide_csv(out.path("prices_aligned.csv"), panel)
    frac = panel.fill_fraction()
    out.csv(
        "fill_report.csv",
        ["symbol", "sector", "filled_days", "fill_fraction"],
        ([s, sec, int(m.sum()), float(f)] for s, sec, m, f in zip(panel.symbols, panel.sectors, panel.fill_mask, frac)),
    )
    out.results.update(
        n_stocks=len(panel.symbols), n_dates=len(panel.dates), excluded=list(panel.excluded),
        max_fill_fraction=float(frac.max()),
    )


def _write_returns(out: Outputs, r: ReturnPanel) -> None:
    out.csv("returns.csv", ["date", *r.symbols], ([d, *map(float, r.values[:, k])] for k, d in enumerate(r.dates)))
    out.csv("return_stats.csv", ["symbol", "mean", "sigma"], zip(r.symbols, map(float, r.mean), map(float, r.sigma)))


def _write_correlation(out: Outputs, r: ReturnPanel, C: CorrelationMatrix, cfg: RunConfig,
                       dec: SpectralDecomposition, sur: SpectralDecomposition) -> None:
    out.matrix("correlation.csv", C.symbols, C.values)
    law = C.law()
    centres, emp, mp = eigenvalue_histogram(dec.eigenvalues, law, cfg.bins)
    _, sdens, _ = eigenvalue_histogram(sur.eigenvalues, law, cfg.bins)
    out.csv("eigenvalue_density.csv", ["lambda", "empirical_density", "surrogate_density", "mp_density"],
            zip(map(float, centres), map(float, emp), map(float, sdens), map(float, mp)))
    grid = np.linspace(law.lambda_min, law.lambda_max, 201)
    out.csv("mp_curve.csv", ["lambda", "density"], zip(map(float, grid), map(float, mp_density(law, grid))))
    out.results.update(Q=C.Q, lambda_min=law.lambda_min, lambda_max=law.lambda_max,
                       lambda0=float(dec.eigenvalues[0]), surrogate_lambda0=float(sur.eigenvalues[0]))


def _write_spectrum(out: Outputs, C: CorrelationMatrix, dec: SpectralDecomposition, sectors: dict) -> None:
    law = C.law()
    rep = classify_spectrum(dec, law)
    cls = {i: "bulk" for i in rep.bulk_indices}
    cls.update({i: "above" for i in rep.deviating_above})
    cls.update({i: "below" for i in rep.deviating_below})
    iprs = [p for _, p in ipr_profile(dec)][::-1]
    out.csv("eigenvalues.csv", ["index", "eigenvalue", "class", "ipr"],
            ([j, float(dec.eigenvalues[j]), cls[j], iprs[j]] for j in range(dec.n)))
    out.csv("ipr_profile.csv", ["eigenvalue", "ipr", "random_expectation"],
            ([lam, p, 3.0 / dec.n] for lam, p in ipr_profile(dec)))

    # component histograms: market mode and three bulk modes, scaled to sum(u^2) = N
    picks = [("market", 0)]
    bulk = list(rep.bulk_indices)
    if bulk:
        picks += [(f"bulk{j}", j) for j in (bulk[0], bulk[len(bulk) // 2], bulk[-1])]
    picks = list(dict(picks).items())
    tests = {name: porter_thomas_test(dec.scaled(j)) for name, j in picks}
    edges = next(iter(tests.values())).edges
    centres = 0.5 * (edges[:-1] + edges[1:])
    gauss = np.exp(-centres**2 / 2) / np.sqrt(2 * np.pi)
    out.csv("porter_thomas.csv", ["u", "gaussian", *tests],
            ([float(c), float(g), *(float(t.density()[k]) for t in tests.values())]
             for k, (c, g) in enumerate(zip(centres, gauss))))
    out.csv("porter_thomas_ks.csv", ["vector", "index", "ks_statistic"],
            ([name, j, tests[name].ks_statistic] for name, j in picks))

    # sector layout of the three largest eigenvectors, stocks grouped by sector
    order = sorted(range(dec.n), key=lambda i: (sectors.get(dec.symbols[i], ""), dec.symbols[i]))
    top3 = min(3, dec.n)
    out.csv("eigenvector_components.csv", ["symbol", "sector", *(f"abs_u{j}" for j in range(top3))],
            ([dec.symbols[i], sectors.get(dec.symbols[i], ""), *(float(abs(dec.eigenvectors[j, i])) for j in range(top3))]
             for i in order))
    comp_rows, top_rows = [], []
    for j in rep.deviating_above or (0,):
        sc = sector_composition(dec, j, sectors)
        comp_rows += [[j, s, sc.weight[s], sc.share[s], sc.mass[s]] for s in sc.weight]
        top_rows += [[j, rank + 1, sym, sec, a] for rank, (sym, sec, a) in enumerate(sc.top)]
    out.csv("sector_composition.csv", ["index", "sector", "abs_weight", "abs_share", "square_share"], comp_rows)
    out.csv("top_contributors.csv", ["index", "rank", "symbol", "sector", "abs_component"], top_rows)
    out.results.update(
        Q=C.Q, lambda_min=law.lambda_min, lambda_max=law.lambda_max, lambda0=float(dec.eigenvalues[0]),
        lambda0_over_lambda_max=float(dec.eigenvalues[0] / law.lambda_max),
        n_above=len(rep.deviating_above), n_below=len(rep.deviating_below),
        deviating_fraction=rep.n_deviating / dec.n, jacobi_sweeps=dec.sweeps,
    )


def _resolve_ns(cfg: RunConfig, dec: SpectralDecomposition, law: RmtLaw) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NsWarning)
        suggested, rationale = suggest_ns(dec, law)
    print(f"suggested n_s = {suggested} ({rationale} sector eigenvalue(s) above lambda_max)", file=sys.stderr)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if not cfg.ns:
        raise ConfigError("choose the number of sector modes with --ns <int> or accept the suggestion with --ns auto")
    if cfg.ns == "auto":
        return suggested
    try:
        return int(cfg.ns)
    except ValueError:
        raise ConfigError(f"--ns must be an integer or 'auto', got {cfg.ns!r}") from None


def _write_decompose(out: Outputs, C: CorrelationMatrix, comp: CorrelationComponents, bins: int = 100) -> None:
    out.matrix("c_market.csv", C.symbols, comp.market)
    out.matrix("c_sector.csv", C.symbols, comp.sector)
    out.matrix("c_random.csv", C.symbols, comp.random)
    rows = []
    for name, m in (("full", C.values), ("market", comp.market), ("sector", comp.sector), ("random", comp.random)):
        counts, edges = element_distribution(m, bins)
        rows += [[name, float(lo), float(hi), int(c)] for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
    out.csv("element_distribution.csv", ["component", "bin_left", "bin_right", "count"], rows)
    out.results.update(n_s=comp.n_s)


def _export(out: Outputs, g: MarketGraph, stem: str, which: str) -> None:
    formats = list(GRAPH_FORMATS) if which == "all" else [which]
    for fmt in formats:
        if fmt not in GRAPH_FORMATS:
            raise ConfigError(f"unknown graph format {fmt!r}")
        export_graph(g, fmt, out.path(stem + GRAPH_FORMATS[fmt]))


def _grid(spec: str) -> list[float]:
    try:
        if ":" in spec:
            a, b, s = (float(x) for x in spec.split(":"))
            n = int(math.floor((b - a) / s + 1e-9))
            return [round(a + k * s, 12) for k in range(max(n, 0))]
        return [float(x) for x in spec.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad threshold grid {spec!r}") from None


def _write_mst(out: Outputs, C: CorrelationMatrix, sectors: dict, cfg: RunConfig) -> MarketGraph:
    g = minimum_spanning_tree(mantegna_distance(C), C.symbols, [sectors[s] for s in C.symbols])
    _export(out, g, "mst", cfg.graph_format)
    out.results.update(mst_total_distance=g.total_weight(), mst_edges=len(g.edges))
    return g


def _write_threshold(out: Outputs, C: CorrelationMatrix, comp: CorrelationComponents, sectors: dict,
                     cfg: RunConfig) -> MarketGraph:
    labels = [sectors[s] for s in C.symbols]
    if cfg.cth == "sweep":
        sweep = sweep_threshold(comp.sector, _grid(cfg.cth_grid), labels)
        out.csv("threshold_sweep.csv", ["c_th", "n_components", "largest_component", "n_clusters", "ari"],
                ([r.c_th, r.n_components, r.largest, r.n_clusters, r.ari] for r in sweep.rows))
        c_th = sweep.recommended
        best = sweep.best()
        out.results.update(recommended_cth=c_th, recommended_ari=best.ari)
    else:
        try:
            c_th = float(cfg.cth)
        except ValueError:
            raise ConfigError(f"--cth must be a number or 'sweep', got {cfg.cth!r}") from None
    g = threshold_network(comp.sector, c_th, C.symbols, labels)
    _export(out, g, "threshold", cfg.graph_format)
    out.results.update(cth=c_th, threshold_edges=len(g.edges))
    return g


def _analyse(cfg: RunConfig):
    r = load_returns(cfg)
    C = correlation_matrix(r)
    return r, C, eigendecompose(C)


# -- subcommands --------------------------------------------------------------


def cmd_ingest(cfg: RunConfig, out: Outputs) -> None:
    _write_ingest(out, load_panel(cfg))


def cmd_returns(cfg: RunConfig, out: Outputs) -> None:
    _write_returns(out, load_returns(cfg))


def cmd_correlate(cfg: RunConfig, out: Outputs) -> None:
    r, C, dec = _analyse(cfg)
    sur = eigendecompose(surrogate_correlation(r, cfg.seed))
    _write_correlation(out, r, C, cfg, dec, sur)


def cmd_spectrum(cfg: RunConfig, out: Outputs) -> None:
    r, C, dec = _analyse(cfg)
    _write_spectrum(out, C, dec, r.sector_map())


def cmd_decompose(cfg: RunConfig, out: Outputs) -> None:
    r, C, dec = _analyse(cfg)
    comp = decompose(dec, _resolve_ns(cfg, dec, C.law()))
    _write_decompose(out, C, comp)


def cmd_network(cfg: RunConfig, out: Outputs) -> None:
    r, C, dec = _analyse(cfg)
    sectors = r.sector_map()
    if cfg.kind == "mst":
        _write_mst(out, C, sectors, cfg)
    elif cfg.kind == "threshold":
        comp = decompose(dec, _resolve_ns(cfg, dec, C.law()))
        _write_threshold(out, C, comp, sectors, cfg)
    else:
        raise ConfigError(f"--kind must be mst or threshold, got {cfg.kind!r}")


def cmd_temporal_overlap(cfg: RunConfig, out: Outputs) -> None:
    r = load_returns(cfg)
    o = overlap_matrix(r, cfg.t, cfg.T, cfg.tau, cfg.k)
    header = [f"b{j}" for j in range(cfg.k)]
    out.csv("overlap_signed.csv", ["row", *header], ([f"a{i}", *map(float, row)] for i, row in enumerate(o.values)))
    out.csv("overlap_abs.csv", ["row", *header], ([f"a{i}", *map(float, row)] for i, row in enumerate(o.abs)))
    out.results.update(window_a=list(o.window_a), window_b=list(o.window_b), tau=o.tau,
                       diagonal=[float(x) for x in o.diagonal()])


def cmd_temporal_rolling(cfg: RunConfig, out: Outputs) -> None:
    r = load_returns(cfg)
    track = rolling_market_mode(r, cfg.T, cfg.dt)
    top = set(track.top(cfg.top))
    rows = []
    for m, (w0, w1) in enumerate(track.windows):
        for i, sym in enumerate(track.symbols):
            if sym in top:
                rows.append([m, w0, w1, sym, float(abs(track.contributions[i, m]))])
    out.csv("market_mode_contributions.csv", ["window", "start", "end", "symbol", "abs_u0"], rows)
    out.csv("consistency_rank.csv", ["rank", "symbol"], ([k + 1, s] for k, s in enumerate(track.consistency_rank)))
    series = lambda0_series(track)
    out.csv("lambda0_series.csv", ["window", "start", "end", "lambda0", "mean_correlation"],
            ([m, w[0], w[1], lam, c] for m, (w, lam, c) in enumerate(series.rows)))
    out.results.update(n_windows=track.n_windows, lambda0_mean_correlation_pearson=series.pearson)


def _synth_spec(cfg: RunConfig) -> FactorModelSpec:
    if cfg.preset == "planted":
        spec = planted_market_spec(cfg.seed, cfg.n_stocks, cfg.n_days, cfg.beta)
    elif cfg.preset == "noise":
        spec = FactorModelSpec(cfg.n_stocks, cfg.n_days, market_beta=0.0, seed=cfg.seed)
    else:
        raise ConfigError(f"unknown synth preset {cfg.preset!r}")
    if cfg.sectors:
        try:
            sectors = tuple((int(c), float(g)) for c, g in (p.split(":") for p in cfg.sectors.split(",")))
        except ValueError:
            raise ConfigError(f"--sectors must look like 'count:loading,...', got {cfg.sectors!r}") from None
        spec = dataclasses.replace(spec, sectors=sectors)
    return dataclasses.replace(spec, idiosyncratic_sigma=cfg.sigma)


def cmd_synth(cfg: RunConfig, out: Outputs) -> None:
    spec = _synth_spec(cfg)
    res = generate(spec)
    prices = price_panel_from_returns(res.raw, cfg.initial_price, res.start_date)
    write_long_csv(out.path("prices.csv"), prices)
    out.csv("truth.csv", ["symbol", "sector"], res.labels.items())
    out.results.update(
        expected_lambda0=res.expected.lambda0,
        expected_sector_eigenvalues=list(res.expected.sector_eigenvalues),
        n_stocks=spec.n_stocks, n_days=spec.n_days,
    )


def cmd_pipeline(cfg: RunConfig, out: Outputs) -> None:
    panel = load_panel(cfg)
    _write_ingest(out, panel)
    r = normalize(log_returns(panel, cfg.lag))
    _write_returns(out, r)
    C = correlation_matrix(r)
    dec = eigendecompose(C)
    sur = eigendecompose(surrogate_correlation(r, cfg.seed))
    _write_correlation(out, r, C, cfg, dec, sur)
    sectors = r.sector_map()
    _write_spectrum(out, C, dec, sectors)
    comp = decompose(dec, _resolve_ns(cfg, dec, C.law()))
    _write_decompose(out, C, comp)
    _write_mst(out, C, sectors, cfg)
    _write_threshold(out, C, comp, sectors, cfg)


COMMANDS = {
    "ingest": cmd_ingest,
    "returns": cmd_returns,
    "correlate": cmd_correlate,
    "spectrum": cmd_spectrum,
    "decompose": cmd_decompose,
    "network": cmd_network,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
    "temporal overlap": cmd_temporal_overlap,
    "temporal rolling": cmd_temporal_rolling,
}


# -- argument parsing ---------------------------------------------------------


def _add(p: argparse.ArgumentParser, *flags, **kw) -> None:
    p.add_argument(*flags, default=argparse.SUPPRESS, **kw)


def _common(p: argparse.ArgumentParser, data: bool = True) -> None:
    _add(p, "--config", dest="config", help="INI file with a [run] section")
    _add(p, "--out", "-o", help=f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT})")
    _add(p, "--seed", type=int)
    if data:
        _add(p, "--input", "-i", help="closing prices CSV")
        _add(p, "--format", choices=["long-csv", "wide-csv"])
        _add(p, "--sector-map", dest="sector_map", help="CSV symbol,sector")
        _add(p, "--calendar", choices=["union", "intersection"])
        _add(p, "--fill-cap", dest="fill_cap", type=float)
        _add(p, "--start-date", dest="start_date")
        _add(p, "--end-date", dest="end_date")
        _add(p, "--lag", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtcorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rmtcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("ingest", help="align prices, report forward fills"))
    _common(sub.add_parser("returns", help="normalized log returns"))
    p = sub.add_parser("correlate", help="correlation matrix and eigenvalue density")
    _common(p)
    _add(p, "--bins", type=int)
    _common(sub.add_parser("spectrum", help="eigenvalues, IPR, component statistics"))
    p = sub.add_parser("decompose", help="market / sector / random components")
    _common(p)
    _add(p, "--ns", help="number of sector modes, or 'auto'")
    p = sub.add_parser("network", help="MST or thresholded sector network")
    _common(p)
    _add(p, "--kind", choices=["mst", "threshold"])
    _add(p, "--cth", help="threshold value or 'sweep'")
    _add(p, "--cth-grid", dest="cth_grid", help="start:stop:step or comma list")
    _add(p, "--ns")
    _add(p, "--graph-format", dest="graph_format", choices=["all", *GRAPH_FORMATS])

    p = sub.add_parser("temporal", help="time evolution of the correlation structure")
    tsub = p.add_subparsers(dest="temporal_command", required=True)
    q = tsub.add_parser("overlap", help="eigenvector overlap between lagged windows")
    _common(q)
    _add(q, "--T", dest="T", type=int)
    _add(q, "--tau", type=int)
    _add(q, "--k", type=int)
    _add(q, "--t", dest="t", type=int, help="start index of the first window")
    q = tsub.add_parser("rolling", help="market mode over sliding windows")
    _common(q)
    _add(q, "--T", dest="T", type=int)
    _add(q, "--dt", type=int)
    _add(q, "--top", type=int)

    p = sub.add_parser("synth", help="write a synthetic factor-model market")
    _common(p, data=False)
    _add(p, "--preset", choices=["planted", "noise"])
    _add(p, "--n-stocks", dest="n_stocks", type=int)
    _add(p, "--n-days", dest="n_days", type=int)
    _add(p, "--beta", type=float)
    _add(p, "--sectors", help="count:loading,... (overrides preset)")
    _add(p, "--sigma", type=float)
    _add(p, "--initial-price", dest="initial_price", type=float)

    p = sub.add_parser("pipeline", help="returns -> C -> spectrum -> decomposition -> networks")
    _common(p)
    _add(p, "--bins", type=int)
    _add(p, "--ns")
    _add(p, "--cth")
    _add(p, "--cth-grid", dest="cth_grid")
    _add(p, "--graph-format", dest="graph_format", choices=["all", *GRAPH_FORMATS])
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = vars(ns).copy()
    values.pop("command", None)
    values.pop("temporal_command", None)
    path = values.pop("config", None)
    cfg = RunConfig.from_file(path) if path else RunConfig()
    cfg = cfg.updated({k: str(v) for k, v in values.items()})
    if not cfg.out:
        cfg.out = os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT)
    return cfg


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    name = args.command + (f" {args.temporal_command}" if args.command == "temporal" else "")
    try:
        cfg = resolve_config(args)
        out = Outputs(Path(cfg.out))
        COMMANDS[name](cfg, out)
        out.manifest(name, cfg, _inputs(cfg) if name != "synth" else [])
    except RmtError as exc:
        print(f"rmtcorr {name}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"rmtcorr {name}: error: {exc}", file=sys.stderr)
        return IO_EXIT_CODE
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
