"""Empirical statistics of drive-test traces.

Lost packets sit at the bottom of every distribution: an ECDF built from
``n`` received values and ``n_lost`` lost packets starts at
``n_lost / (n + n_lost)``. Rank tables exclude lost packets since no rank
is reported when nothing is decoded.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import EmptyInput, NoRankData, QuantileInLossRegion
from .trace.model import MISSING_INT, DriveTrace

SNR_CAP_DB = 30.0


@dataclass(frozen=True)
class EcdfCurve:
    """Step ECDF with a loss offset.

    ``values`` are the sorted received samples and ``probs[i]`` the cumulative
    probability reached at ``values[i]``: ``(n_lost + i + 1) / n_total``.
    """

    values: np.ndarray
    probs: np.ndarray
    loss_fraction: float
    n_effective: int
    n_total: int

    @property
    def points(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def cdf(self, x) -> float:
        """Cumulative probability of values <= x, lost packets included."""
        below = np.searchsorted(self.values, x, side="right")
        n_lost = self.n_total - self.n_effective
        return (n_lost + int(below)) / self.n_total

    def quantile(self, q: float) -> float:
        """Left-continuous inverse: the smallest value whose ECDF reaches ``q``."""
        if not 0.0 < q <= 1.0:
            raise ValueError(f"quantile level must lie in (0, 1], got {q}")
        if self.n_effective == 0 or q <= self.loss_fraction:
            raise QuantileInLossRegion(
                f"q={q} falls inside the loss region (curve starts at {self.loss_fraction})")
        i = int(np.searchsorted(self.probs, q, side="left"))
        return float(self.values[min(i, self.n_effective - 1)])

    def to_csv(self) -> bytes:
        lines = ["value,cum_prob"]
        lines += [f"{v!r},{p!r}" for v, p in zip(self.values.tolist(), self.probs.tolist())]
        return ("\n".join(lines) + "\n").encode("utf-8")


def empirical_cdf_with_loss(samples, n_lost: int = 0) -> EcdfCurve:
    """ECDF of received ``samples`` with ``n_lost`` lost packets stacked below them."""
    if n_lost < 0:
        raise ValueError("n_lost must be non-negative")
    values = np.sort(np.asarray(samples, dtype=float))
    n = values.size
    total = n + n_lost
    if total == 0:
        raise EmptyInput("no samples and no lost packets")
    probs = (n_lost + np.arange(1, n + 1)) / total
    values.setflags(write=False)
    probs.setflags(write=False)
    return EcdfCurve(values, probs, n_lost / total, n, total)


def cap_values(samples, cap: float = SNR_CAP_DB) -> np.ndarray:
    """Element-wise ``min(sample, cap)``, e.g. a saturating SNR reading."""
    return np.minimum(np.asarray(samples, dtype=float), cap)


@dataclass(frozen=True)
class RankTable:
    probabilities: dict
    n: int = 0

    def __post_init__(self):
        if abs(math.fsum(self.probabilities.values()) - 1.0) > 1e-9:
            raise ValueError("rank probabilities must sum to 1")

    def to_dict(self) -> dict:
        return {"n": self.n, "probabilities": {str(k): v for k, v in self.probabilities.items()}}


def rank_table_from_ranks(ranks) -> RankTable:
    ranks = [int(r) for r in ranks]
    if not ranks:
        raise NoRankData("no rank-bearing samples")
    counts = Counter(ranks)
    n = len(ranks)
    return RankTable({r: counts[r] / n for r in sorted(counts)}, n)


def rank_occurrence(trace: DriveTrace) -> RankTable:
    """Occurrence frequencies of the reported rank over samples that carry one."""
    return rank_table_from_ranks(trace.rank[trace.rank != MISSING_INT].tolist())


def prob_rank_above(t: RankTable, k: int) -> float:
    return math.fsum(p for r, p in t.probabilities.items() if r > k)


def percentile_delta(a: EcdfCurve, b: EcdfCurve, q: float) -> float:
    """``a.quantile(q) - b.quantile(q)``; raises QuantileInLossRegion if either is undefined."""
    return a.quantile(q) - b.quantile(q)


def fraction_above_threshold(samples, n_lost: int, thresh: float) -> float:
    """Share of all measurements, lost packets included, strictly above ``thresh``."""
    x = np.asarray(samples, dtype=float)
    total = x.size + n_lost
    if total == 0:
        raise EmptyInput("no samples and no lost packets")
    return int(np.count_nonzero(x > thresh)) / total


def trace_ecdf(trace: DriveTrace, column: str, cap: float = None) -> EcdfCurve:
    """ECDF of one float column; lost packets supply the offset.

    Received samples lacking the column are left out entirely rather than
    counted as lost.
    """
    values = np.asarray(getattr(trace, column))
    received = ~trace.lost_mask
    present = values[received & ~np.isnan(values)]
    if cap is not None:
        present = cap_values(present, cap)
    return empirical_cdf_with_loss(present, trace.n_lost)


def summarize_trace(trace: DriveTrace) -> Mapping:
    """Plain-data summary feeding the report command."""
    received = ~trace.lost_mask
    thr = trace.throughput[received & ~np.isnan(trace.throughput)]
    snr = trace.snr[received & ~np.isnan(trace.snr)]
    ranks = trace.rank[trace.rank != MISSING_INT]
    return {
        "band_label": trace.band_label,
        "n_samples": len(trace),
        "n_lost": trace.n_lost,
        "loss_fraction": trace.loss_fraction,
        "throughput_mbps": thr.tolist(),
        "snr_db": snr.tolist(),
        "rank_counts": {str(r): int(c) for r, c in sorted(Counter(ranks.tolist()).items())},
    }
