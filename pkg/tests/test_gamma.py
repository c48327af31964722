import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize, stats

from beamssr.errors import DegenerateSample, DomainError, EmptySample
from beamssr.ssr import (MEASURED_SSR_GAMMA, GammaParams, fit_gamma_mle, gamma_cdf,
                         gamma_log_likelihood, gamma_pdf, gamma_quantile)
from beamssr.synth import generate_ssr_samples

# arbitrary-precision quadrature of the shape/scale density; see test_acceptance too
MODEL_MEDIAN_M = 18.560348628820166868
MODEL_Q90_M = 88.994328782344637389
RATE_READING_MEDIAN_M = 0.0060039428047267761981


def test_params_validate_and_convert():
    p = GammaParams(2.0, 3.0)
    assert p.rate == pytest.approx(1 / 3) and p.mean == 6.0 and p.variance == 18.0
    assert GammaParams.from_rate(2.0, 0.5) == GammaParams(2.0, 2.0)
    for bad in ((0.0, 1.0), (1.0, -1.0), (math.inf, 1.0)):
        with pytest.raises(DomainError):
            GammaParams(*bad)


def test_pdf_exponential_reduction():
    assert gamma_pdf(1.0, GammaParams(1.0, 1.0)) == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_pdf_vanishes_near_zero_for_shape_above_one():
    assert gamma_pdf(1e-12, GammaParams(2.0, 1.0)) < 1e-11


def test_pdf_pinned_value():
    # closed form evaluated at 40 digits
    assert gamma_pdf(10.0, MEASURED_SSR_GAMMA) == pytest.approx(0.019955554064954849122, rel=1e-10)


def test_domain_errors():
    with pytest.raises(DomainError):
        gamma_pdf(0.0, MEASURED_SSR_GAMMA)
    with pytest.raises(DomainError):
        gamma_cdf(-1.0, MEASURED_SSR_GAMMA)
    with pytest.raises(DomainError):
        gamma_quantile(1.0, MEASURED_SSR_GAMMA)


def test_cdf_exponential_median():
    assert gamma_cdf(math.log(2.0), GammaParams(1.0, 1.0)) == pytest.approx(0.5, abs=1e-15)


def test_reference_quantiles_pinned():
    assert gamma_quantile(0.5, MEASURED_SSR_GAMMA) == pytest.approx(MODEL_MEDIAN_M, rel=1e-10)
    assert gamma_quantile(0.9, MEASURED_SSR_GAMMA) == pytest.approx(MODEL_Q90_M, rel=1e-10)
    rate = GammaParams.from_rate(0.62, 55.6)
    assert gamma_quantile(0.5, rate) == pytest.approx(RATE_READING_MEDIAN_M, rel=1e-9)


param_st = st.tuples(st.floats(0.3, 5.0), st.floats(0.5, 200.0))


@settings(max_examples=100, deadline=None)
@given(param_st, st.floats(0.01, 0.99))
def test_quantile_cdf_round_trip(ab, q):
    p = GammaParams(*ab)
    x = gamma_quantile(q, p)
    assert abs(gamma_cdf(x, p) - q) <= 1e-10
    assert gamma_quantile(gamma_cdf(x, p), p) == pytest.approx(x, rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(param_st, st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=20))
def test_cdf_monotone(ab, xs):
    p = GammaParams(*ab)
    xs = np.sort(np.array(xs))
    c = gamma_cdf(xs, p)
    assert np.all(np.diff(c) >= 0)
    assert np.all((c >= 0) & (c <= 1))


def test_cdf_limits():
    p = GammaParams(0.62, 55.6)
    assert gamma_cdf(1e-300, p) < 1e-100
    assert gamma_cdf(1e6, p) == 1.0


def test_cdf_matches_scipy():
    p = GammaParams(2.3, 7.0)
    xs = np.linspace(0.1, 80, 200)
    np.testing.assert_allclose(gamma_cdf(xs, p), stats.gamma.cdf(xs, 2.3, scale=7.0), atol=1e-13)


def test_pdf_normalizes_by_quadrature():
    rng = np.random.default_rng(20240611)
    for _ in range(20):
        p = GammaParams(rng.uniform(0.3, 5.0), rng.uniform(1.0, 100.0))
        top = gamma_quantile(1 - 1e-10, p)
        total, _ = integrate.quad(lambda x: gamma_pdf(x, p), 0, top, limit=400)
        assert total == pytest.approx(1.0, abs=1e-6)


def test_fit_small_sample_matches_generic_optimizer():
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    mle = fit_gamma_mle(x)

    def nll(v):
        a, t = np.exp(v)
        return -np.sum(stats.gamma.logpdf(x, a, scale=t))

    res = optimize.minimize(nll, x0=np.log([1.0, 3.0]), method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
    a, t = np.exp(res.x)
    assert mle.shape == pytest.approx(a, rel=1e-6)
    assert mle.scale == pytest.approx(t, rel=1e-6)


def test_fit_degenerate_and_empty():
    with pytest.raises(DegenerateSample):
        fit_gamma_mle([3.0, 3.0, 3.0])
    with pytest.raises(DegenerateSample):
        fit_gamma_mle([3.0])
    with pytest.raises(EmptySample):
        fit_gamma_mle([])


def test_fit_recovers_parameters():
    x = generate_ssr_samples(MEASURED_SSR_GAMMA, 100_000, seed=11)
    p = fit_gamma_mle(x)
    assert p.shape == pytest.approx(0.62, rel=0.05)
    assert p.scale == pytest.approx(55.6, rel=0.05)


@settings(max_examples=30, deadline=None)
@given(param_st, st.integers(0, 2 ** 32))
def test_mle_stationary(ab, seed):
    x = generate_ssr_samples(GammaParams(*ab), 500, seed)
    p = fit_gamma_mle(x)
    h = 1e-6
    da = (gamma_log_likelihood(x, GammaParams(p.shape * (1 + h), p.scale), mean=True)
          - gamma_log_likelihood(x, GammaParams(p.shape * (1 - h), p.scale), mean=True)) / (2 * h * p.shape)
    dt = (gamma_log_likelihood(x, GammaParams(p.shape, p.scale * (1 + h)), mean=True)
          - gamma_log_likelihood(x, GammaParams(p.shape, p.scale * (1 - h)), mean=True)) / (2 * h * p.scale)
    assert abs(da) <= 1e-4 and abs(dt) <= 1e-4
