"""Eigendecomposition of correlation matrices and eigenvector diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy import stats

from .correlation import CorrelationMatrix, RmtLaw
from .errors import IndexOutOfRangeError, NoConvergenceError, NotNormalizedError, NotSymmetricError
from .market_data import DEFAULT_SECTOR

MAX_SWEEPS = 100
OFF_TOL = 1e-12


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint (p, q) pairings covering every index pair once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        order = np.argsort(ps)
        rounds.append((np.array(ps)[order], np.array(qs)[order]))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def jacobi_eigh(a: np.ndarray, max_sweeps: int = MAX_SWEEPS, tol: float = OFF_TOL):
    """Symmetric eigensolver by cyclic Jacobi rotations.

    Each round applies a full set of disjoint plane rotations at once
    (round-robin ordering), so a sweep costs ``n - 1`` vectorized updates.
    Returns ``(eigenvalues, V, sweeps)`` with eigenvectors in the columns of
    ``V``, unsorted.
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    Vt = np.eye(n)  # eigenvectors as rows
    if n < 2:
        return np.diag(A).copy(), Vt.T, 0
    fro = np.linalg.norm(A)
    if fro == 0:
        return np.zeros(n), Vt.T, 0
    threshold = tol * fro
    rounds = _round_robin(n)
    off_mask = ~np.eye(n, dtype=bool)
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(A[off_mask] ** 2))
        if off < threshold:
            return np.diag(A).copy(), Vt.T, sweep
        if sweep == max_sweeps:
            break
        for P, Q in rounds:
            app, aqq, apq = A[P, P], A[Q, Q], A[P, Q]
            diff = aqq - app
            denom = np.abs(diff) + np.sqrt(diff * diff + 4.0 * apq * apq)
            sgn = np.where(diff >= 0, 1.0, -1.0)
            with np.errstate(invalid="ignore", divide="ignore"):
                t = np.where(denom > 0, sgn * 2.0 * apq / denom, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cc, ss = c[:, None], s[:, None]
            # rotate rows, then columns via the transpose (rows are contiguous)
            rp, rq = A[P], A[Q]
            A[P], A[Q] = cc * rp - ss * rq, ss * rp + cc * rq
            A = np.ascontiguousarray(A.T)
            rp, rq = A[P], A[Q]
            A[P], A[Q] = cc * rp - ss * rq, ss * rp + cc * rq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = Vt[P], Vt[Q]
            Vt[P], Vt[Q] = cc * vp - ss * vq, ss * vp + cc * vq
    diag = np.abs(np.diag(A))
    cond = diag.max() / diag.min() if diag.min() > 0 else np.inf
    raise NoConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps: off-diagonal norm {off:.3e} "
        f"vs target {threshold:.3e}; |diag| ratio {cond:.3e}"
    )


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its components sum to a non-negative number.

    Rows whose sum vanishes instead get their largest-magnitude component
    positive (first one on ties).
    """
    out = np.array(vectors, dtype=float)
    sums = out.sum(axis=1)
    for j in range(out.shape[0]):
        if abs(sums[j]) > 1e-10:
            if sums[j] < 0:
                out[j] = -out[j]
        else:
            k = int(np.argmax(np.abs(out[j])))
            if out[j, k] < 0:
                out[j] = -out[j]
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order; row ``j`` of ``eigenvectors`` is the
    unit-norm eigenvector of ``eigenvalues[j]``.

    Components are unit-norm internally. Multiply by ``sqrt(N)`` (see
    :meth:`scaled`) for the sum-of-squares-equals-N display convention.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    symbols: tuple[str, ...] = ()
    sign_convention: str = "sum-positive"
    sweeps: int = 0

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def vector(self, j: int) -> np.ndarray:
        if not 0 <= j < self.n:
            raise IndexOutOfRangeError(f"eigenvector index {j} outside [0, {self.n})")
        return self.eigenvectors[j]

    def scaled(self, j: int) -> np.ndarray:
        return np.sqrt(self.n) * self.vector(j)

    def reconstruct(self, indices=None) -> np.ndarray:
        idx = slice(None) if indices is None else list(indices)
        U = self.eigenvectors[idx]
        return (U.T * self.eigenvalues[idx]) @ U


def eigendecompose(C: CorrelationMatrix | np.ndarray) -> SpectralDecomposition:
    if isinstance(C, CorrelationMatrix):
        values, symbols = C.values, C.symbols
    else:
        values, symbols = np.asarray(C, dtype=float), ()
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise NotSymmetricError(f"matrix must be square, got shape {values.shape}")
    asym = np.max(np.abs(values - values.T)) if values.size else 0.0
    if asym > 1e-10 * max(1.0, np.max(np.abs(values))):
        raise NotSymmetricError(f"max |C - C^T| = {asym:.3e}")
    w, V, sweeps = jacobi_eigh(0.5 * (values + values.T))
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(
        eigenvalues=w[order],
        eigenvectors=fix_signs(V[:, order].T),
        symbols=tuple(symbols),
        sweeps=sweeps,
    )


def ipr(u) -> float:
    """Inverse participation ratio ``sum(u_i**4)`` of a unit vector."""
    u = np.asarray(u, dtype=float)
    norm2 = float(u @ u)
    if abs(norm2 - 1.0) >= 1e-9:
        raise NotNormalizedError(f"|u|^2 = {norm2!r}, expected 1")
    return float(np.sum(u**4))


def ipr_profile(dec: SpectralDecomposition) -> list[tuple[float, float]]:
    """``(eigenvalue, IPR)`` pairs in ascending eigenvalue order."""
    pairs = [(float(lam), ipr(u)) for lam, u in zip(dec.eigenvalues, dec.eigenvectors)]
    return pairs[::-1]


@dataclass(frozen=True)
class PorterThomasResult:
    ks_statistic: float
    counts: np.ndarray
    edges: np.ndarray

    def density(self) -> np.ndarray:
        width = np.diff(self.edges)
        total = self.counts.sum()
        return self.counts / (total * width) if total else np.zeros_like(width)


def porter_thomas_test(components, bins: int = 25, range: tuple[float, float] = (-4.0, 4.0)):
    """Compare eigenvector components (scaled so their squares sum to N)
    with a standard normal: Kolmogorov-Smirnov distance plus a histogram.
    """
    x = np.asarray(components, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("components must be non-empty")
    ks = stats.kstest(x, "norm").statistic
    counts, edges = np.histogram(x, bins=bins, range=range)
    return PorterThomasResult(float(ks), counts, edges)


@dataclass(frozen=True)
class SpectrumReport:
    law: RmtLaw
    bulk_indices: tuple[int, ...]
    deviating_above: tuple[int, ...]
    deviating_below: tuple[int, ...]
    market_index: int = 0

    @property
    def n_deviating(self) -> int:
        return len(self.deviating_above) + len(self.deviating_below)


def classify_spectrum(dec: SpectralDecomposition, law: RmtLaw) -> SpectrumReport:
    lam = dec.eigenvalues
    above = np.flatnonzero(lam > law.lambda_max)
    below = np.flatnonzero(lam < law.lambda_min)
    bulk = np.flatnonzero((lam >= law.lambda_min) & (lam <= law.lambda_max))
    return SpectrumReport(
        law,
        tuple(int(i) for i in bulk),
        tuple(int(i) for i in above),
        tuple(int(i) for i in below),
    )


@dataclass(frozen=True)
class SectorComposition:
    index: int
    eigenvalue: float
    weight: dict[str, float]  # sector -> sum |u_i|
    share: dict[str, float]  # sector -> fraction of sum |u_i|
    mass: dict[str, float]  # sector -> fraction of sum u_i**2
    top: list[tuple[str, str, float]]  # (symbol, sector, |u_i|)

    @property
    def dominant(self) -> str:
        return max(sorted(self.mass), key=lambda s: self.mass[s])

    def top_purity(self, sector: str | None = None) -> float:
        """Fraction of the top-k symbols that belong to ``sector``
        (default: the dominant sector)."""
        sector = self.dominant if sector is None else sector
        if not self.top:
            return 0.0
        return sum(sec == sector for _, sec, _ in self.top) / len(self.top)


def sector_composition(
    dec: SpectralDecomposition,
    j: int,
    sectors: Mapping[str, str],
    k: int = 10,
) -> SectorComposition:
    """Break eigenvector ``j`` down by sector and list its top-k symbols."""
    u = np.abs(dec.vector(j))
    symbols = dec.symbols or tuple(str(i) for i in range(dec.n))
    labels = [sectors.get(s, DEFAULT_SECTOR) or DEFAULT_SECTOR for s in symbols]
    weight: dict[str, float] = {}
    sq: dict[str, float] = {}
    for lab, a in zip(labels, u):
        weight[lab] = weight.get(lab, 0.0) + float(a)
        sq[lab] = sq.get(lab, 0.0) + float(a * a)
    total, total_sq = u.sum(), float(u @ u)
    names = sorted(weight)
    order = sorted(range(len(u)), key=lambda i: (-u[i], symbols[i]))[:k]
    return SectorComposition(
        index=j,
        eigenvalue=float(dec.eigenvalues[j]),
        weight={s: weight[s] for s in names},
        share={s: weight[s] / total if total else 0.0 for s in names},
        mass={s: sq[s] / total_sq if total_sq else 0.0 for s in names},
        top=[(symbols[i], labels[i], float(u[i])) for i in order],
    )
