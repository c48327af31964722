"""Special functions backing the gamma SSR model.

Only ``math.lgamma`` is borrowed from the standard library; digamma,
trigamma and the regularized incomplete gamma function are computed here.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, NonConvergence

MAX_ITERATIONS = 200
_EPS = np.finfo(float).eps
_TINY = 1e-300

_ASYMPTOTIC_SHIFT = 6.0

# Bernoulli-number coefficients B_2k / (2k) for the digamma tail
_DIGAMMA_TAIL = (1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132, -691.0 / 32760,
                 1.0 / 12, -3617.0 / 8160)
# B_2k for the trigamma tail
_TRIGAMMA_TAIL = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6,
                  -3617.0 / 510)


def digamma(x: float) -> float:
    """psi(x) for x > 0: upward recurrence to x >= 6, then the asymptotic series."""
    if not x > 0 or math.isinf(x):
        raise DomainError(f"digamma requires finite x > 0, got {x}")
    shift = 0.0
    while x < _ASYMPTOTIC_SHIFT:
        shift += 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    for c in reversed(_DIGAMMA_TAIL):
        tail = (tail + c) * inv2
    return math.log(x) - 0.5 / x - tail - shift


def trigamma(x: float) -> float:
    """psi'(x) for x > 0, same recurrence/asymptotic scheme as :func:`digamma`."""
    if not x > 0 or math.isinf(x):
        raise DomainError(f"trigamma requires finite x > 0, got {x}")
    shift = 0.0
    while x < _ASYMPTOTIC_SHIFT:
        shift += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    tail = 0.0
    for c in reversed(_TRIGAMMA_TAIL):
        tail = (tail + c) * inv2
    return inv + 0.5 * inv2 + tail * inv + shift


def _series_p(a, x):
    """Lower regularized gamma P(a, x) by series; valid for x < a + 1."""
    term = np.full_like(x, 1.0 / a)
    total = term.copy()
    ap = a
    active = np.ones(x.shape, dtype=bool)
    for _ in range(MAX_ITERATIONS):
        ap += 1.0
        term = np.where(active, term * x / ap, term)
        total = np.where(active, total + term, total)
        active &= np.abs(term) > np.abs(total) * _EPS
        if not active.any():
            break
    else:
        raise NonConvergence(f"incomplete gamma series for a={a} did not converge")
    with np.errstate(divide="ignore"):
        log_pref = a * np.log(x) - x - math.lgamma(a)
    return total * np.exp(log_pref)


def _contfrac_q(a, x):
    """Upper regularized gamma Q(a, x) by modified Lentz continued fraction; x >= a + 1."""
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, MAX_ITERATIONS + 1):
        an = -i * (i - a)
        b = b + 2.0
        d_new = an * d + b
        d_new = np.where(np.abs(d_new) < _TINY, _TINY, d_new)
        c_new = b + an / c
        c_new = np.where(np.abs(c_new) < _TINY, _TINY, c_new)
        d_new = 1.0 / d_new
        delta = d_new * c_new
        d = np.where(active, d_new, d)
        c = np.where(active, c_new, c)
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _EPS
        if not active.any():
            break
    else:
        raise NonConvergence(f"incomplete gamma continued fraction for a={a} did not converge")
    log_pref = a * np.log(x) - x - math.lgamma(a)
    return np.exp(log_pref) * h


def regularized_lower_gamma(a: float, x):
    """P(a, x) = gamma(a, x) / Gamma(a) for scalar shape ``a > 0`` and ``x >= 0``.

    Accepts a scalar or array ``x``; returns the same kind.
    """
    if not a > 0 or math.isinf(a):
        raise DomainError(f"shape must be finite and positive, got {a}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.isnan(xs)) or np.any(xs < 0):
        raise DomainError("incomplete gamma requires x >= 0")
    out = np.zeros_like(xs)
    use_series = (xs > 0) & (xs < a + 1.0)
    use_cf = xs >= a + 1.0
    if use_series.any():
        out[use_series] = _series_p(a, xs[use_series])
    if use_cf.any():
        finite = use_cf & np.isfinite(xs)
        out[use_cf & ~finite] = 1.0
        if finite.any():
            out[finite] = 1.0 - _contfrac_q(a, xs[finite])
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def regularized_upper_gamma(a: float, x):
    """Q(a, x) = 1 - P(a, x), evaluated directly in the tail to keep relative accuracy."""
    if not a > 0 or math.isinf(a):
        raise DomainError(f"shape must be finite and positive, got {a}")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.isnan(xs)) or np.any(xs < 0):
        raise DomainError("incomplete gamma requires x >= 0")
    out = np.ones_like(xs)
    use_series = (xs > 0) & (xs < a + 1.0)
    use_cf = xs >= a + 1.0
    if use_series.any():
        out[use_series] = 1.0 - _series_p(a, xs[use_series])
    if use_cf.any():
        finite = use_cf & np.isfinite(xs)
        out[use_cf & ~finite] = 0.0
        if finite.any():
            out[finite] = _contfrac_q(a, xs[finite])
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out
