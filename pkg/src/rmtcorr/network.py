"""Correlation networks: Mantegna-distance spanning trees and thresholded
sector-correlation graphs, with cluster scoring and file export."""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.stats.contingency import crosstab

from .correlation import CorrelationMatrix
from .errors import CorrelationOutOfRangeError, InvalidDistanceMatrixError, ParseError
from .market_data import DEFAULT_SECTOR

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class MarketGraph:
    symbols: tuple[str, ...]
    sectors: tuple[str, ...]
    edges: tuple[Edge, ...]
    kind: str  # "mst" or "threshold"

    @property
    def n_nodes(self) -> int:
        return len(self.symbols)

    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    def edge_set(self) -> frozenset[tuple[str, str, float]]:
        out = set()
        for i, j, w in self.edges:
            a, b = sorted((self.symbols[i], self.symbols[j]))
            out.add((a, b, float(w)))
        return frozenset(out)

    def components(self) -> np.ndarray:
        """Connected-component id per node; ids numbered by first member."""
        n = self.n_nodes
        if not self.edges:
            return np.arange(n)
        i, j, _ = zip(*self.edges)
        adj = coo_matrix((np.ones(len(i)), (i, j)), shape=(n, n))
        _, labels = connected_components(adj, directed=False)
        # relabel in order of first appearance for stable output
        remap: dict[int, int] = {}
        return np.array([remap.setdefault(int(c), len(remap)) for c in labels])


def _graph_nodes(n, symbols, sectors):
    symbols = tuple(symbols) if symbols is not None else tuple(str(i) for i in range(n))
    sectors = tuple(sectors) if sectors is not None else (DEFAULT_SECTOR,) * n
    if len(symbols) != n or len(sectors) != n:
        raise ValueError("symbols/sectors length does not match matrix size")
    return symbols, sectors


def mantegna_distance(C: CorrelationMatrix | np.ndarray) -> np.ndarray:
    """``d_ij = sqrt(2 (1 - C_ij))``."""
    values = C.values if isinstance(C, CorrelationMatrix) else np.asarray(C, dtype=float)
    if np.any(np.abs(values) > 1 + 1e-12) or not np.all(np.isfinite(values)):
        raise CorrelationOutOfRangeError("correlations must lie in [-1, 1]")
    d = np.sqrt(2.0 * (1.0 - np.clip(values, -1.0, 1.0)))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def _pairs(x: np.ndarray) -> float:
    return float(np.sum(x * (x - 1)) / 2)


def adjusted_rand_score(labels_a, labels_b) -> float:
    """Chance-corrected Rand index between two partitions (Hubert-Arabie)."""
    table = crosstab(np.asarray(labels_a), np.asarray(labels_b)).count
    n = table.sum()
    index = _pairs(table)
    rows, cols = _pairs(table.sum(axis=1)), _pairs(table.sum(axis=0))
    expected = rows * cols / _pairs(np.array([n])) if n > 1 else 0.0
    top = 0.5 * (rows + cols)
    if top == expected:
        return 1.0
    return (index - expected) / (top - expected)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def minimum_spanning_tree(
    d: np.ndarray,
    symbols: Sequence[str] | None = None,
    sectors: Sequence[str] | None = None,
) -> MarketGraph:
    """Kruskal's algorithm over all node pairs; equal weights are taken in
    lexicographic ``(i, j)`` order."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise InvalidDistanceMatrixError(f"distance matrix must be square, got {d.shape}")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise InvalidDistanceMatrixError("distances must be finite and non-negative")
    if np.max(np.abs(d - d.T)) > 1e-12 or np.any(np.diag(d) != 0):
        raise InvalidDistanceMatrixError("distance matrix must be symmetric with zero diagonal")
    n = d.shape[0]
    symbols, sectors = _graph_nodes(n, symbols, sectors)
    iu, ju = np.triu_indices(n, k=1)
    w = d[iu, ju]
    order = np.lexsort((ju, iu, w))
    dsu = _DisjointSet(n)
    edges: list[Edge] = []
    for k in order:
        i, j = int(iu[k]), int(ju[k])
        if dsu.union(i, j):
            edges.append((i, j, float(w[k])))
            if len(edges) == n - 1:
                break
    return MarketGraph(symbols, sectors, tuple(edges), "mst")


def threshold_network(
    sector: np.ndarray,
    c_th: float,
    symbols: Sequence[str] | None = None,
    sectors: Sequence[str] | None = None,
) -> MarketGraph:
    """Link ``i`` and ``j`` when ``sector[i, j] > c_th``. Isolated nodes stay
    in the node set."""
    m = np.asarray(sector, dtype=float)
    n = m.shape[0]
    symbols, sectors = _graph_nodes(n, symbols, sectors)
    iu, ju = np.triu_indices(n, k=1)
    vals = m[iu, ju]
    keep = np.flatnonzero(vals > c_th)
    edges = tuple((int(iu[k]), int(ju[k]), float(vals[k])) for k in keep)
    return MarketGraph(symbols, sectors, edges, "threshold")


def reference_partition(labels: Sequence[str], ungrouped: Sequence[str] = (DEFAULT_SECTOR,)) -> np.ndarray:
    """Integer cluster ids from sector labels.

    Stocks carrying a catch-all label (``ungrouped``) are not a group; each
    becomes its own singleton cluster.
    """
    ids: dict[str, int] = {}
    out = []
    next_id = 0
    for lab in labels:
        if lab in ungrouped:
            out.append(next_id)
            next_id += 1
            continue
        if lab not in ids:
            ids[lab] = next_id
            next_id += 1
        out.append(ids[lab])
    return np.array(out)


@dataclass(frozen=True)
class ClusterScore:
    partition: np.ndarray
    agreement: float


def cluster_score(graph: MarketGraph, reference: Sequence[str], ungrouped=(DEFAULT_SECTOR,)) -> ClusterScore:
    part = graph.components()
    ari = adjusted_rand_score(reference_partition(reference, ungrouped), part)
    return ClusterScore(part, float(ari))


@dataclass(frozen=True)
class SweepRow:
    c_th: float
    n_components: int
    largest: int
    n_clusters: int  # components with at least 3 members
    ari: float


@dataclass(frozen=True)
class ThresholdSweep:
    rows: tuple[SweepRow, ...]
    recommended: float

    def best(self) -> SweepRow:
        return next(r for r in self.rows if r.c_th == self.recommended)


def sweep_threshold(
    sector: np.ndarray,
    grid: Sequence[float],
    reference: Sequence[str] | None = None,
    ungrouped: Sequence[str] = (DEFAULT_SECTOR,),
) -> ThresholdSweep:
    """Evaluate ``threshold_network`` over a grid of thresholds.

    With reference labels the recommended threshold maximizes the adjusted
    Rand index, ties going to the larger threshold. Without labels it is the
    lowest threshold (largest clusters) of the longest run of consecutive
    grid points sharing the same non-zero count of components with at least
    three members.
    """
    grid = [float(c) for c in grid]
    if not grid:
        raise ValueError("threshold grid must be non-empty")
    if reference is not None and all(lab in ungrouped for lab in reference):
        reference = None
    ref = None if reference is None else reference_partition(reference, ungrouped)
    rows = []
    for c in grid:
        g = threshold_network(sector, c)
        part = g.components()
        sizes = np.bincount(part)
        ari = float(adjusted_rand_score(ref, part)) if ref is not None else math.nan
        rows.append(SweepRow(c, int(sizes.size), int(sizes.max()), int(np.sum(sizes >= 3)), ari))
    if ref is not None:
        return ThresholdSweep(tuple(rows), max(rows, key=lambda r: (r.ari, r.c_th)).c_th)
    return ThresholdSweep(tuple(rows), _stable_threshold(rows))


def _stable_threshold(rows: Sequence[SweepRow]) -> float:
    by_c = sorted(rows, key=lambda r: r.c_th)
    best, best_key = by_c[-1].c_th, (0, 0)
    start = 0
    for k in range(1, len(by_c) + 1):
        if k == len(by_c) or by_c[k].n_clusters != by_c[start].n_clusters:
            run = by_c[start:k]
            key = (len(run), run[0].n_clusters)
            if run[0].n_clusters > 0 and key > best_key:
                best, best_key = run[0].c_th, key
            start = k
    return best


# -- export -----------------------------------------------------------------

_PALETTE = (
    "red", "blue", "green", "orange", "purple", "brown", "magenta",
    "cyan", "gold", "darkgreen", "navy", "gray", "pink", "olive",
)


def sector_colors(sectors: Sequence[str]) -> dict[str, str]:
    return {s: _PALETTE[k % len(_PALETTE)] for k, s in enumerate(sorted(set(sectors)))}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _fmt(w: float) -> str:
    return repr(float(w))


def write_pajek(g: MarketGraph, path: str | Path) -> None:
    lines = [f"*Vertices {g.n_nodes}"]
    lines += [f"{k + 1} {_quote(sym)}" for k, sym in enumerate(g.symbols)]
    lines.append("*Edges")
    lines += [f"{i + 1} {j + 1} {_fmt(w)}" for i, j, w in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def write_dot(g: MarketGraph, path: str | Path) -> None:
    colors = sector_colors(g.sectors)
    lines = [f"graph {g.kind} {{"]
    for sym, sec in zip(g.symbols, g.sectors):
        lines.append(f"  {_quote(sym)} [sector={_quote(sec)}, color={_quote(colors[sec])}];")
    for i, j, w in g.edges:
        lines.append(f"  {_quote(g.symbols[i])} -- {_quote(g.symbols[j])} [weight={_fmt(w)}];")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_edge_csv(g: MarketGraph, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src", "dst", "weight"])
        for i, j, wt in g.edges:
            w.writerow([g.symbols[i], g.symbols[j], _fmt(wt)])


def export_graph(g: MarketGraph, format: str, path: str | Path) -> Path:
    writers = {"pajek-net": write_pajek, "dot": write_dot, "edge-csv": write_edge_csv}
    if format not in writers:
        raise ValueError(f"unknown graph format {format!r}")
    writers[format](g, path)
    return Path(path)


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        text = text[1:-1].replace('\\"', '"').replace("\\\\", "\\")
    return text


def read_edge_csv(path: str | Path) -> frozenset[tuple[str, str, float]]:
    out = set()
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["src", "dst", "weight"]:
            raise ParseError("edge CSV header must be 'src,dst,weight'", 1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ParseError("expected 3 columns", lineno)
            a, b = sorted((row[0], row[1]))
            out.add((a, b, float(row[2])))
    return frozenset(out)


def read_pajek(path: str | Path) -> frozenset[tuple[str, str, float]]:
    labels: dict[int, str] = {}
    out = set()
    section = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.lower().startswith("*vertices"):
            section = "v"
            continue
        if line.lower().startswith("*edges"):
            section = "e"
            continue
        if section == "v":
            num, _, label = line.partition(" ")
            labels[int(num)] = _unquote(label)
        elif section == "e":
            parts = line.split()
            if len(parts) < 3:
                raise ParseError("edge line needs 'i j weight'", lineno)
            a, b = sorted((labels[int(parts[0])], labels[int(parts[1])]))
            out.add((a, b, float(parts[2])))
        else:
            raise ParseError("content before *Vertices", lineno)
    return frozenset(out)


_DOT_EDGE = re.compile(r'^\s*("(?:[^"\\]|\\.)*")\s*--\s*("(?:[^"\\]|\\.)*")\s*\[weight=([^\]]+)\];')


def read_dot(path: str | Path) -> frozenset[tuple[str, str, float]]:
    """Edge set of a DOT file in the layout written by :func:`write_dot`."""
    out = set()
    for line in Path(path).read_text().splitlines():
        m = _DOT_EDGE.match(line)
        if m:
            a, b = sorted((_unquote(m.group(1)), _unquote(m.group(2))))
            out.add((a, b, float(m.group(3))))
    return frozenset(out)
