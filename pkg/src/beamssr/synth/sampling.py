"""Gamma variates for synthetic SSR segment lengths."""

from __future__ import annotations

import math

import numpy as np

from ..ssr.gamma import GammaParams
from .rng import as_rng


def _standard_gamma_ge1(a: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Marsaglia-Tsang squeeze/accept sampler for shape ``a >= 1``, unit scale."""
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(16, int(1.1 * (n - filled)) + 16)
        x = rng.standard_normal(m)
        u = rng.random(m)
        v = (1.0 + c * x) ** 3
        ok = v > 0
        vs = np.where(ok, v, 1.0)
        squeeze = u < 1.0 - 0.0331 * x ** 4
        with np.errstate(divide="ignore"):
            full = np.log(u) < 0.5 * x * x + d * (1.0 - vs + np.log(vs))
        accepted = (d * vs)[ok & (squeeze | full)]
        take = min(accepted.size, n - filled)
        out[filled:filled + take] = accepted[:take]
        filled += take
    return out


def standard_gamma(a: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-scale gamma variates; shape < 1 uses G(a) = G(a + 1) * U**(1/a)."""
    if not a > 0:
        raise ValueError("shape must be positive")
    if a >= 1.0:
        return _standard_gamma_ge1(a, n, rng)
    g = _standard_gamma_ge1(a + 1.0, n, rng)
    u = 1.0 - rng.random(n)  # (0, 1]: keeps every variate strictly positive
    return g * u ** (1.0 / a)


def generate_ssr_samples(p: GammaParams, n: int, seed) -> np.ndarray:
    """``n`` independent gamma(shape, scale) distances; bit-identical for a fixed seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = as_rng(seed)
    return standard_gamma(p.shape, n, rng) * p.scale
