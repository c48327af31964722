"""Kolmogorov-Smirnov scoring and candidate-distribution selection for SSR samples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special as sp

from ..errors import DegenerateSample, EmptyReport, EmptySample, FitError, NonConvergence
from .gamma import GammaParams, _distances_of, fit_gamma_mle, gamma_cdf
from .special import digamma, trigamma

KS_COEFFICIENT_05 = 1.358
BETA_HEADROOM = 1.001
CANDIDATES = ("gamma", "lognormal", "beta")


def ks_statistic(samples, cdf: Callable) -> float:
    """One-sample Kolmogorov-Smirnov distance between the sample ECDF and ``cdf``.

    ``cdf`` is called once with the sorted sample array and must return an
    array of the same length.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise EmptySample("KS statistic of an empty sample")
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        f = np.array([float(cdf(v)) for v in x])
    i = np.arange(1, n + 1)
    d = np.maximum(np.abs(i / n - f), np.abs((i - 1) / n - f)).max()
    return float(min(max(d, 0.0), 1.0))


def ks_critical(n: int, level: float = 0.05) -> float:
    """Asymptotic two-sided KS critical value; only the 5% level is tabulated."""
    if n < 1:
        raise EmptySample("critical value needs n >= 1")
    if level != 0.05:
        raise ValueError("only level=0.05 is supported")
    return KS_COEFFICIENT_05 / math.sqrt(n)


def fit_lognormal(x) -> dict:
    logs = np.log(np.asarray(x, dtype=float))
    mu = math.fsum(logs.tolist()) / logs.size
    sigma = math.sqrt(math.fsum(((logs - mu) ** 2).tolist()) / logs.size)
    if not sigma > 0:
        raise DegenerateSample("lognormal fit needs spread in log-distances")
    return {"mu": mu, "sigma": sigma}


def lognormal_cdf(x, mu, sigma):
    return sp.ndtr((np.log(x) - mu) / sigma)


def fit_beta(y, max_iter: int = 100, rtol: float = 1e-10) -> dict:
    """Beta MLE on data in (0, 1): Newton on the digamma score equations."""
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y >= 1)):
        raise FitError("beta data must lie strictly inside (0, 1)")
    mean_log = math.fsum(np.log(y).tolist()) / y.size
    mean_log1m = math.fsum(np.log1p(-y).tolist()) / y.size
    m = float(y.mean())
    v = float(y.var())
    if not v > 0:
        raise DegenerateSample("beta fit needs spread in the data")
    common = m * (1.0 - m) / v - 1.0
    a, b = (m * common, (1.0 - m) * common) if common > 0 else (1.0, 1.0)
    for _ in range(max_iter):
        tab = trigamma(a + b)
        g1 = digamma(a) - digamma(a + b) - mean_log
        g2 = digamma(b) - digamma(a + b) - mean_log1m
        h11, h22, h12 = trigamma(a) - tab, trigamma(b) - tab, -tab
        det = h11 * h22 - h12 * h12
        da = (h22 * g1 - h12 * g2) / det
        db = (h11 * g2 - h12 * g1) / det
        t = 1.0
        while a - t * da <= 0 or b - t * db <= 0:
            t *= 0.5
        a_new, b_new = a - t * da, b - t * db
        converged = abs(a_new - a) <= rtol * a_new and abs(b_new - b) <= rtol * b_new
        a, b = a_new, b_new
        if converged:
            return {"a": a, "b": b}
    raise NonConvergence("beta MLE did not converge")


@dataclass
class CandidateFit:
    name: str
    params: dict = field(default_factory=dict)
    ks_d: Optional[float] = None
    n: int = 0
    critical: Optional[float] = None
    passed: bool = False
    error: Optional[str] = None

    @property
    def competing(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "ks_d": self.ks_d,
            "n": self.n,
            "ks_critical_05": self.critical,
            "pass": self.passed,
            "error": self.error,
        }


@dataclass
class FitReport:
    candidates: dict
    winner: str
    zero_length_runs: int = 0
    total_runs: int = 0

    @property
    def gamma(self) -> Optional[GammaParams]:
        c = self.candidates.get("gamma")
        if c is None or not c.competing:
            return None
        return GammaParams(c.params["shape"], c.params["scale"])

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "n": self.candidates[self.winner].n,
            "zero_length_runs": self.zero_length_runs,
            "total_runs": self.total_runs,
            "candidates": [self.candidates[name].to_dict() for name in CANDIDATES
                           if name in self.candidates],
        }


def _score(name, params, x, cdf):
    d = ks_statistic(x, cdf)
    crit = ks_critical(x.size)
    return CandidateFit(name, params, d, int(x.size), crit, d <= crit)


def fit_candidates(s) -> FitReport:
    """Fit gamma, lognormal and beta models and pick the smallest KS distance.

    The beta candidate is fit to distances divided by 1.001 times the sample
    maximum so that every point lies strictly inside (0, 1). A candidate whose
    fit fails is kept in the report with its error and does not compete.

    Raises:
        EmptyReport: no candidate could be fit.
    """
    x = _distances_of(s)
    zero = getattr(s, "zero_length_runs", 0)
    total = getattr(s, "total_runs", x.size)
    if x.size == 0:
        raise EmptyReport("no SSR distances to fit")

    fits = {}
    try:
        g = fit_gamma_mle(x)
        fits["gamma"] = _score("gamma", g.to_dict(), x, lambda v: gamma_cdf(v, g))
    except (FitError, NonConvergence, ValueError) as exc:
        fits["gamma"] = CandidateFit("gamma", n=int(x.size), error=f"{type(exc).__name__}: {exc}")
    try:
        ln = fit_lognormal(x)
        fits["lognormal"] = _score("lognormal", ln, x,
                                   lambda v: lognormal_cdf(v, ln["mu"], ln["sigma"]))
    except (FitError, NonConvergence, ValueError) as exc:
        fits["lognormal"] = CandidateFit("lognormal", n=int(x.size),
                                         error=f"{type(exc).__name__}: {exc}")
    try:
        norm = BETA_HEADROOM * float(x.max())
        bt = fit_beta(x / norm)
        bt["normalizer"] = norm
        fits["beta"] = _score("beta", bt, x, lambda v: sp.betainc(bt["a"], bt["b"], v / norm))
    except (FitError, NonConvergence, ValueError, ZeroDivisionError) as exc:
        fits["beta"] = CandidateFit("beta", n=int(x.size), error=f"{type(exc).__name__}: {exc}")

    competing = [f for f in fits.values() if f.competing]
    if not competing:
        reasons = "; ".join(f"{f.name}: {f.error}" for f in fits.values())
        raise EmptyReport(f"every candidate failed ({reasons})")
    # ties resolved by the fixed candidate order
    winner = min(competing, key=lambda f: (f.ks_d, CANDIDATES.index(f.name)))
    return FitReport(fits, winner.name, zero, total)
