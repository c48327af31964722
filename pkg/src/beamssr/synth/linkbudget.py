"""Free-space link budget used to attach RSRP values to synthetic routes.

This is plumbing, not a propagation model: RSRP = EIRP - FSPL - shadowing,
with no antenna pattern, blockage or per-resource-element power split.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.signal import lfilter

from ..errors import DomainError

DEFAULT_UE_HEIGHT_M = 1.5


class BaseStation(NamedTuple):
    lat: float
    lon: float
    height: float = 12.0


def free_space_path_loss(d, f):
    """FSPL in dB for distance ``d`` in meters and frequency ``f`` in MHz.

    ``20 log10(d / 1000) + 20 log10(f) + 32.44``.
    """
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)) or not f > 0:
        raise DomainError("distance and frequency must be positive")
    loss = 20.0 * np.log10(d_arr / 1000.0) + 20.0 * math.log10(f) + 32.44
    return float(loss) if np.ndim(d) == 0 else loss


def slant_distance(ground_m, bs_height: float, ue_height: float = DEFAULT_UE_HEIGHT_M):
    return np.hypot(np.asarray(ground_m, dtype=float), bs_height - ue_height)


def correlated_shadowing(n: int, step: float, sigma: float, decay_length: float,
                         rng: np.random.Generator) -> np.ndarray:
    """Zero-mean Gaussian shadowing with exponential spatial correlation.

    First-order autoregressive filter over samples ``step`` meters apart with
    coefficient ``exp(-step / decay_length)``; the marginal standard deviation
    stays ``sigma`` at every sample.
    """
    if sigma == 0 or n == 0:
        return np.zeros(n)
    w = rng.standard_normal(n)
    rho = math.exp(-step / decay_length) if decay_length > 0 else 0.0
    innov = math.sqrt(1.0 - rho * rho)
    out = np.empty(n)
    out[0] = w[0]
    if n > 1:
        out[1:], _ = lfilter([innov], [1.0, -rho], w[1:], zi=[rho * w[0]])
    return sigma * out
