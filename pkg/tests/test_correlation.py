import numpy as np
import pytest
from scipy import integrate

from conftest import make_panel
from oracles import mp_cdf_trapezoid
from rmtcorr.correlation import (
    RmtLaw,
    correlation_matrix,
    eigenvalue_histogram,
    mp_bounds,
    mp_cdf,
    mp_density,
    surrogate_correlation,
)
from rmtcorr.errors import InvalidQError, NotNormalizedError
from rmtcorr.spectral import eigendecompose


def test_identical_rows():
    C = correlation_matrix(make_panel([[1, 2, 0, 3], [1, 2, 0, 3]]))
    np.testing.assert_allclose(C.values, [[1, 1], [1, 1]], atol=1e-15)


def test_anticorrelated():
    C = correlation_matrix(make_panel([[1, -1, 1, -1], [-1, 1, -1, 1]]))
    assert C.values[0, 1] == pytest.approx(-1, abs=1e-15)


def test_independent_rows_sampling_bound():
    rng = np.random.default_rng(3)
    T = 10_000
    C = correlation_matrix(make_panel(rng.standard_normal((2, T))))
    assert abs(C.values[0, 1]) < 5 / np.sqrt(T)


def test_requires_normalized():
    with pytest.raises(NotNormalizedError):
        correlation_matrix(make_panel([[1, 2, 3], [3, 1, 2]], normalized=False))


def test_matrix_invariants():
    rng = np.random.default_rng(4)
    C = correlation_matrix(make_panel(rng.standard_normal((30, 90))))
    assert np.max(np.abs(C.values - C.values.T)) <= 1e-12
    assert np.all(np.diag(C.values) == 1.0)
    assert np.trace(C.values) == 30
    assert np.all(np.abs(C.values) <= 1 + 1e-12)
    assert C.Q == 3.0
    dec = eigendecompose(C)
    assert abs(dec.eigenvalues.sum() - 30) < 1e-8 * 30


def test_bounds_nse_q():
    law = mp_bounds(12.97)
    assert law.lambda_max == pytest.approx(1.6325, abs=5e-4)
    assert law.lambda_min == pytest.approx((1 - 1 / np.sqrt(12.97)) ** 2, abs=1e-12)


@pytest.mark.parametrize("Q,lo,hi", [(1, 0.0, 4.0), (4, 0.25, 2.25)])
def test_bounds_closed_form(Q, lo, hi):
    law = RmtLaw(Q)
    assert law.lambda_min == pytest.approx(lo, abs=1e-12)
    assert law.lambda_max == pytest.approx(hi, abs=1e-12)


def test_invalid_q():
    with pytest.raises(InvalidQError):
        RmtLaw(0.5)


@pytest.mark.parametrize("Q", [1.0, 1.5, 4.0, 12.97, 100.0])
def test_density_integrates_to_one(Q):
    law = RmtLaw(Q)
    total, _ = integrate.quad(lambda x: mp_density(law, x), law.lambda_min, law.lambda_max, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_density_zero_outside_support():
    law = RmtLaw(4)
    assert mp_density(law, 0.1) == 0.0
    assert mp_density(law, 3.0) == 0.0
    assert np.all(mp_density(law, np.array([0.2, 2.3])) == 0.0)
    assert mp_density(law, 1.0) > 0


@pytest.mark.parametrize("Q", [2.0, 12.97])
def test_cdf_against_trapezoid_oracle(Q):
    law = RmtLaw(Q)
    for x in np.linspace(law.lambda_min, law.lambda_max, 7):
        assert mp_cdf(law, x) == pytest.approx(mp_cdf_trapezoid(Q, x), abs=1e-7)


def test_surrogate_deterministic():
    rng = np.random.default_rng(5)
    r = make_panel(rng.standard_normal((10, 50)))
    a = surrogate_correlation(r, seed=7)
    b = surrogate_correlation(r, seed=7)
    assert a.source == "surrogate"
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, surrogate_correlation(r, seed=8).values)


def test_surrogate_preserves_marginals():
    rng = np.random.default_rng(6)
    r = make_panel(rng.standard_normal((5, 40)))
    s = rng.permuted(r.values, axis=1)
    assert np.allclose(np.sort(s, axis=1), np.sort(r.values, axis=1))


def test_surrogate_single_stock():
    r = make_panel(np.random.default_rng(0).standard_normal((1, 20)))
    assert surrogate_correlation(r, 0).values.tolist() == [[1.0]]


def test_surrogate_spectrum_inside_bounds():
    rng = np.random.default_rng(8)
    base = rng.standard_normal(2000)
    x = 0.7 * base + rng.standard_normal((50, 2000))  # strongly correlated panel
    C = surrogate_correlation(make_panel(x), seed=1)
    law = RmtLaw(40)
    lam = eigendecompose(C).eigenvalues
    assert lam.max() <= law.lambda_max + 0.1
    assert lam.min() >= law.lambda_min - 0.1


def test_surrogate_leakage_small(noise_panel):
    C = surrogate_correlation(noise_panel, seed=2)
    law = C.law()
    lam = eigendecompose(C).eigenvalues
    outside = np.mean((lam > law.lambda_max) | (lam < law.lambda_min))
    assert outside < 0.02


def test_histogram_helper():
    law = RmtLaw(4)
    centres, dens, mp = eigenvalue_histogram([0.5, 1.0, 1.5, 2.0], law)
    assert centres.size == dens.size == mp.size == 50
    width = 1.2 * law.lambda_max / 50
    assert dens.sum() * width == pytest.approx(1.0)
