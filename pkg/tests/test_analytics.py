from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamssr.analytics import (cap_values, empirical_cdf_with_loss, fraction_above_threshold,
                               percentile_delta, prob_rank_above, rank_occurrence,
                               rank_table_from_ranks, summarize_trace, trace_ecdf)
from beamssr.errors import EmptyInput, NoRankData, QuantileInLossRegion
from beamssr.trace import DriveTrace

MEASURED_RANK_FREQUENCIES = {1: 0.32, 2: 0.2, 3: 0.17, 4: 0.23, 5: 0.03, 6: 0.02, 7: 0.01, 8: 0.02}

values_st = st.lists(st.floats(-50, 50, allow_nan=False), min_size=0, max_size=60)


def test_ecdf_hand_case():
    c = empirical_cdf_with_loss([1, 2, 3], 1)
    assert c.probs.tolist() == [0.5, 0.75, 1.0]
    assert c.loss_fraction == 0.25


def test_ecdf_loss_offset_start():
    c = empirical_cdf_with_loss(np.linspace(0, 1, 77), 23)
    assert c.loss_fraction == 0.23
    assert c.probs[0] == pytest.approx(0.24) and c.probs[0] > 0.23


def test_ecdf_without_loss_is_textbook():
    x = [3.0, 1.0, 2.0, 2.0]
    c = empirical_cdf_with_loss(x, 0)
    assert c.values.tolist() == [1.0, 2.0, 2.0, 3.0]
    assert c.probs.tolist() == [0.25, 0.5, 0.75, 1.0]
    for v in (0.5, 1.0, 2.0, 2.5, 3.0):
        assert c.cdf(v) == np.mean(np.array(x) <= v)


def test_ecdf_empty():
    with pytest.raises(EmptyInput):
        empirical_cdf_with_loss([], 0)
    c = empirical_cdf_with_loss([], 5)
    assert c.loss_fraction == 1.0 and c.n_effective == 0


def test_ecdf_csv():
    assert empirical_cdf_with_loss([2.0], 1).to_csv() == b"value,cum_prob\n2.0,1.0\n"


@settings(max_examples=200, deadline=None)
@given(values_st, st.integers(0, 30))
def test_ecdf_invariants(xs, n_lost):
    if not xs and not n_lost:
        return
    c = empirical_cdf_with_loss(xs, n_lost)
    assert np.all(np.diff(c.values) >= 0) and np.all(np.diff(c.probs) >= 0)
    if xs:
        n_total = len(xs) + n_lost
        assert c.probs[0] == pytest.approx(c.loss_fraction + 1 / n_total)
        assert c.probs[-1] == 1.0


def test_cap_values():
    assert cap_values([25, 31, 40], 30).tolist() == [25, 30, 30]
    assert cap_values([1, 2], 30).tolist() == [1, 2]


def test_capped_ecdf_shows_riser_at_cap():
    rng = np.random.default_rng(2)
    snr = np.concatenate([rng.uniform(0, 29.9, 800), rng.uniform(30.5, 45, 200)])
    c = empirical_cdf_with_loss(cap_values(snr), 0)
    assert c.cdf(np.nextafter(30.0, 0)) == pytest.approx(0.8)
    assert c.cdf(30.0) == 1.0
    assert np.count_nonzero(c.values == 30.0) == 200


@settings(max_examples=200, deadline=None)
@given(values_st.filter(bool), st.floats(-40, 40))
def test_cap_riser_consistency(xs, cap):
    raw = empirical_cdf_with_loss(xs, 0)
    capped = empirical_cdf_with_loss(cap_values(xs, cap), 0)
    below = np.nextafter(cap, -np.inf)
    assert capped.cdf(below) == raw.cdf(below)
    assert np.all(capped.values[capped.values >= cap] == cap)


def test_rank_table_measured_frequencies():
    ranks = [r for r, p in MEASURED_RANK_FREQUENCIES.items() for _ in range(round(p * 100))]
    t = rank_table_from_ranks(ranks)
    assert t.probabilities == pytest.approx(MEASURED_RANK_FREQUENCIES)
    assert prob_rank_above(t, 2) == pytest.approx(0.48, abs=1e-9)


def test_rank_all_ones():
    t = rank_table_from_ranks([1, 1, 1])
    assert t.probabilities == {1: 1.0} and prob_rank_above(t, 2) == 0


def test_rank_occurrence_excludes_lost_and_empty():
    t = DriveTrace([0.0, 1.0, 2.0], [0.0] * 3, [0.0] * 3, rsrp=[-80.0, np.nan, -80.0],
                   rank=[2, -1, 4])
    assert rank_occurrence(t).probabilities == {2: 0.5, 4: 0.5}
    with pytest.raises(NoRankData):
        rank_table_from_ranks([])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=1, max_size=200), st.randoms())
def test_rank_table_histogram_oracle_and_permutation(ranks, rnd):
    t = rank_table_from_ranks(ranks)
    hist = Counter(ranks)
    assert t.probabilities == {r: hist[r] / len(ranks) for r in sorted(hist)}
    assert abs(sum(t.probabilities.values()) - 1) <= 1e-9
    shuffled = list(ranks)
    rnd.shuffle(shuffled)
    assert rank_table_from_ranks(shuffled).probabilities == t.probabilities


def test_percentile_delta_hand_case():
    a = empirical_cdf_with_loss([1, 2, 3, 4])
    b = empirical_cdf_with_loss([1, 1, 2, 3])
    assert percentile_delta(a, b, 0.5) == 1.0


def test_percentile_delta_loss_region():
    a = empirical_cdf_with_loss([1.0, 2.0], 2)
    b = empirical_cdf_with_loss([1.0, 2.0], 0)
    with pytest.raises(QuantileInLossRegion):
        percentile_delta(a, b, 0.5)
    assert percentile_delta(a, b, 0.7) == -1.0


@settings(max_examples=100, deadline=None)
@given(values_st.filter(bool), st.integers(0, 10), st.floats(0.01, 1.0))
def test_percentile_delta_self_is_zero(xs, n_lost, q):
    c = empirical_cdf_with_loss(xs, n_lost)
    if q <= c.loss_fraction:
        with pytest.raises(QuantileInLossRegion):
            percentile_delta(c, c, q)
    else:
        assert percentile_delta(c, c, q) == 0


def test_fraction_above_threshold():
    assert fraction_above_threshold([0.5, 1.5], 0, 1.0) == 0.5
    assert fraction_above_threshold([1.5], 1, 1.0) == 0.5
    with pytest.raises(EmptyInput):
        fraction_above_threshold([], 0, 1.0)


@settings(max_examples=100, deadline=None)
@given(values_st, st.integers(0, 10), st.floats(-50, 50))
def test_fraction_above_matches_ecdf(xs, n_lost, thresh):
    if not xs and not n_lost:
        return
    c = empirical_cdf_with_loss(xs, n_lost)
    assert fraction_above_threshold(xs, n_lost, thresh) == pytest.approx(1 - c.cdf(thresh))


def test_trace_ecdf_and_summary():
    t = DriveTrace([0.0, 1.0, 2.0, 3.0], [0.0] * 4, [0.0] * 4,
                   rsrp=[-80.0, np.nan, -70.0, -75.0], snr=[35.0, np.nan, 12.0, np.nan],
                   throughput=[900.0, np.nan, 1200.0, 50.0], rank=[2, -1, 3, 3], band_label="mm")
    c = trace_ecdf(t, "snr", cap=30.0)
    assert c.values.tolist() == [12.0, 30.0] and c.loss_fraction == pytest.approx(1 / 3)
    s = summarize_trace(t)
    assert s["n_lost"] == 1 and s["loss_fraction"] == 0.25
    assert s["throughput_mbps"] == [900.0, 1200.0, 50.0]
    assert s["rank_counts"] == {"2": 1, "3": 2}
