import numpy as np
import pytest

from rmtcorr.correlation import correlation_matrix
from rmtcorr.returns import ReturnPanel, normalize
from rmtcorr.spectral import eigendecompose
from rmtcorr.synth import FactorModelSpec, generate, planted_market_spec


def make_panel(values, symbols=None, sectors=None, normalized=True):
    values = np.asarray(values, dtype=float)
    n, t = values.shape
    symbols = tuple(symbols or (f"S{i}" for i in range(n)))
    dates = tuple(f"d{k:05d}" for k in range(t))
    raw = ReturnPanel(symbols, dates, values, sectors=None if sectors is None else tuple(sectors))
    return normalize(raw) if normalized else raw


@pytest.fixture(scope="session")
def noise_panel():
    """N = 201 uncorrelated Gaussian series over the NSE-length period."""
    return generate(FactorModelSpec(201, 2607, market_beta=0.0, seed=11)).panel


@pytest.fixture(scope="session")
def planted():
    return generate(planted_market_spec(seed=0))


@pytest.fixture(scope="session")
def planted_dec(planted):
    C = correlation_matrix(planted.panel)
    return C, eigendecompose(C)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
