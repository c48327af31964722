import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from beamssr.errors import EmptyReport, EmptySample
from beamssr.ssr import (MEASURED_SSR_GAMMA, SsrSampleSet, fit_beta, fit_candidates, fit_gamma_mle,
                         fit_lognormal, gamma_cdf, ks_critical, ks_statistic)
from beamssr.synth import generate_ssr_samples


def test_ks_single_uniform_sample():
    assert ks_statistic([0.5], lambda x: x) == 0.5


@pytest.mark.parametrize("n", [1, 7, 100])
def test_ks_at_quantile_midpoints(n):
    x = (np.arange(1, n + 1) - 0.5) / n
    assert ks_statistic(x, lambda v: v) == pytest.approx(0.5 / n, abs=1e-15)


def test_ks_matches_scipy():
    x = generate_ssr_samples(MEASURED_SSR_GAMMA, 2000, seed=3)
    d = ks_statistic(x, lambda v: gamma_cdf(v, MEASURED_SSR_GAMMA))
    ref = stats.kstest(x, stats.gamma(0.62, scale=55.6).cdf).statistic
    assert d == pytest.approx(ref, abs=1e-12)


def test_ks_empty_and_critical():
    with pytest.raises(EmptySample):
        ks_statistic([], lambda v: v)
    assert ks_critical(100) == pytest.approx(0.1358)
    with pytest.raises(EmptySample):
        ks_critical(0)


def test_ks_self_consistency_of_fitted_model():
    passes = 0
    reps = 40
    for seed in range(reps):
        x = generate_ssr_samples(MEASURED_SSR_GAMMA, 10_000, seed=1000 + seed)
        p = fit_gamma_mle(x)
        passes += ks_statistic(x, lambda v: gamma_cdf(v, p)) < ks_critical(x.size)
    assert passes / reps >= 0.95


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.floats(0.01, 100), st.floats(0.2, 3.0))
def test_ks_invariant_under_monotone_reparameterization(seed, scale, power):
    x = generate_ssr_samples(MEASURED_SSR_GAMMA, 200, seed)
    d = ks_statistic(x, lambda v: gamma_cdf(v, MEASURED_SSR_GAMMA))
    # y = scale * x**power applied to samples and folded into the cdf
    y = scale * x ** power
    d2 = ks_statistic(y, lambda v: gamma_cdf((v / scale) ** (1 / power), MEASURED_SSR_GAMMA))
    assert d2 == pytest.approx(d, abs=1e-9)


def test_lognormal_mle_closed_form():
    x = np.array([1.0, np.e, np.e ** 2])
    p = fit_lognormal(x)
    assert p["mu"] == pytest.approx(1.0) and p["sigma"] == pytest.approx(np.sqrt(2 / 3))


def test_beta_mle_matches_scipy():
    rng = np.random.default_rng(5)
    y = rng.beta(2.0, 5.0, 3000)
    p = fit_beta(y)
    a, b, _, _ = stats.beta.fit(y, floc=0, fscale=1)
    assert p["a"] == pytest.approx(a, rel=1e-4) and p["b"] == pytest.approx(b, rel=1e-4)


def test_gamma_data_selects_gamma():
    x = generate_ssr_samples(MEASURED_SSR_GAMMA, 100_000, seed=8)
    r = fit_candidates(SsrSampleSet(tuple(x), 0, x.size))
    assert r.winner == "gamma"
    assert r.gamma.shape == pytest.approx(0.62, rel=0.05)


def test_lognormal_data_selects_lognormal():
    rng = np.random.default_rng(9)
    x = rng.lognormal(2.5, 1.1, 20_000)
    assert fit_candidates(x).winner == "lognormal"


def test_winner_minimizes_d_and_report_shape():
    x = generate_ssr_samples(MEASURED_SSR_GAMMA, 3000, seed=12)
    r = fit_candidates(SsrSampleSet(tuple(x), 5, x.size + 5))
    ds = {k: c.ks_d for k, c in r.candidates.items() if c.competing}
    assert r.winner == min(ds, key=ds.get)
    doc = r.to_dict()
    assert [c["name"] for c in doc["candidates"]] == ["gamma", "lognormal", "beta"]
    assert doc["zero_length_runs"] == 5 and doc["total_runs"] == x.size + 5
    for c in doc["candidates"]:
        assert 0 <= c["ks_d"] <= 1
        assert set(c) == {"name", "params", "ks_d", "n", "ks_critical_05", "pass", "error"}


def test_degenerate_one_point_data_is_empty_report():
    with pytest.raises(EmptyReport):
        fit_candidates([4.0])
    with pytest.raises(EmptyReport):
        fit_candidates([])
