"""Spatially consistent synthetic beam traces.

A route is sampled every ``step`` meters. Segment lengths are drawn from the
gamma SSR model and every sample within the next L meters keeps the current
beam (so each segment holds at least one sample and every beam change shows
up between two consecutive samples). At a segment end the adjacency order of
the change is drawn and the new beam is picked uniformly among the valid
beams at that index distance.

Edge handling. In a linear array a k-th adjacent move is not available from
every beam (with four beams, order 3 exists only from the two end beams), so
drawing k straight from the target probabilities and discarding impossible
moves cannot reproduce those probabilities. With ``reflect=True`` (default)
orders are drawn among those feasible from the current beam, with per-order
weights calibrated once so that the long-run frequency of each realized order
equals the target. From an end beam this sends a first-order move inward.
With ``reflect=False`` the order is drawn from the targets as given and an
impossible draw raises :class:`InfeasibleAdjacency`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from ..errors import InfeasibleAdjacency, SynthesisError
from ..ssr.gamma import GammaParams
from ..ssr.transitions import TransitionModel
from ..trace.band import BandConfig, preset_document, resolve_band, validate_band_config
from ..trace.geo import haversine_array, interpolate_path, path_legs
from ..trace.model import DriveTrace
from .linkbudget import (DEFAULT_UE_HEIGHT_M, BaseStation, correlated_shadowing,
                         free_space_path_loss, slant_distance)
from .rng import BEAM_STREAM, SHADOWING_STREAM, make_rng
from .sampling import standard_gamma

DEFAULT_STEP_M = 2.0
DEFAULT_SPEED_MPS = 10.0
_BLOCK = 4096


def default_base_station() -> BaseStation:
    """Site of the measured cell, 12 m above ground."""
    b = preset_document()["base_station"]
    return BaseStation(b["lat"], b["lon"], b["height"])


@dataclass(frozen=True)
class Trajectory:
    waypoints: tuple
    step: float = DEFAULT_STEP_M
    speed: float = DEFAULT_SPEED_MPS

    def __post_init__(self):
        wp = tuple((float(lat), float(lon)) for lat, lon in self.waypoints)
        if len(wp) < 2:
            raise SynthesisError("a trajectory needs at least two waypoints")
        if not self.step > 0:
            raise SynthesisError("step must be positive")
        if not self.speed > 0:
            raise SynthesisError("speed must be positive")
        for lat, lon in wp:
            if not (-90 <= lat <= 90 and -180 <= lon <= 180):
                raise SynthesisError(f"waypoint ({lat}, {lon}) out of bounds")
        object.__setattr__(self, "waypoints", wp)

    @property
    def length(self) -> float:
        wp = np.array(self.waypoints)
        return float(path_legs(wp[:, 0], wp[:, 1]).sum())

    def n_samples(self) -> int:
        return int(math.floor(self.length / self.step + 1e-9)) + 1

    def sample_positions(self):
        """Along-path distances, latitudes and longitudes of the emitted samples."""
        s = np.arange(self.n_samples()) * self.step
        lat, lon = interpolate_path(self.waypoints, s)
        return s, lat, lon

    @classmethod
    def from_dict(cls, d: Mapping) -> "Trajectory":
        return cls(tuple(tuple(p) for p in d.get("waypoints", ())),
                   d.get("step", DEFAULT_STEP_M), d.get("speed", DEFAULT_SPEED_MPS))


@dataclass(frozen=True)
class SynthesisSpec:
    gamma: GammaParams
    transitions: TransitionModel
    band: BandConfig
    shadowing_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        validate_band_config(self.band)
        if self.transitions.beam_angles != self.band.beam_angles:
            raise SynthesisError("transition beam_angles differ from the band's beam set")
        if not self.shadowing_sigma >= 0:
            raise SynthesisError("shadowing_sigma must be non-negative")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise SynthesisError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_dict(cls, d: Mapping, seed: Optional[int] = None) -> "SynthesisSpec":
        """Build from a JSON-style mapping.

        ``band`` may be a preset name (``"mmwave_table2"``), a full mapping, or
        ``{"preset": name, ...overrides}``; ``transitions`` may omit
        ``beam_angles`` to inherit the band's beam set.
        """
        try:
            band = resolve_band(d.get("band", "mmwave_table2"))
            g = d["gamma"]
            gamma = GammaParams(float(g["shape"]), float(g["scale"]))
            t = d["transitions"]
            probs = t.get("p_change_given_change", t)
            probs = {int(k): float(v) for k, v in probs.items() if k != "beam_angles"}
            angles = t.get("beam_angles", band.beam_angles) if isinstance(t, Mapping) else band.beam_angles
            transitions = TransitionModel.from_probabilities(angles, probs)
            use_seed = d.get("seed", 0) if seed is None else seed
            return cls(gamma, transitions, band, float(d.get("shadowing_sigma", 0.0)), int(use_seed))
        except (KeyError, TypeError, ValueError) as exc:
            raise SynthesisError(f"invalid synthesis spec: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma.to_dict(),
            "transitions": {"beam_angles": list(self.transitions.beam_angles),
                            "p_change_given_change": {str(k): v for k, v in
                                                      self.transitions.p_change_given_change.items()}},
            "band": self.band.to_dict(),
            "shadowing_sigma": self.shadowing_sigma,
            "seed": self.seed,
        }


def _feasible_orders(i: int, n_beams: int):
    return [k for k in range(1, n_beams) if i - k >= 0 or i + k < n_beams]


def _transition_matrix(weights, n_beams):
    t = np.zeros((n_beams, n_beams))
    for i in range(n_beams):
        orders = [k for k in _feasible_orders(i, n_beams) if weights[k] > 0]
        z = sum(weights[k] for k in orders)
        if z == 0:
            raise InfeasibleAdjacency(f"no allowed beam change from beam index {i}")
        for k in orders:
            targets = [j for j in (i - k, i + k) if 0 <= j < n_beams]
            for j in targets:
                t[i, j] += weights[k] / z / len(targets)
    return t


def realized_order_frequencies(weights, n_beams: int) -> np.ndarray:
    """Long-run frequency of each adjacency order for a uniformly started chain.

    Uses the Cesaro limit of the lazy chain ``(I + T) / 2`` by repeated
    squaring, which is well defined for periodic and reducible chains too.
    """
    t = _transition_matrix(weights, n_beams)
    m = 0.5 * (np.eye(n_beams) + t)
    for _ in range(64):
        m = m @ m
        m /= m.sum(axis=1, keepdims=True)
    pi = np.full(n_beams, 1.0 / n_beams) @ m
    freq = np.zeros(n_beams)
    for i in range(n_beams):
        for j in range(n_beams):
            if i != j:
                freq[abs(i - j)] += pi[i] * t[i, j]
    return freq


def calibrate_order_weights(model: TransitionModel, tol: float = 1e-12,
                            max_iter: int = 1000) -> np.ndarray:
    """Per-order weights whose feasibility-restricted chain realizes the target orders."""
    k_beams = model.n_beams
    target = np.zeros(k_beams)
    for k, v in model.p_change_given_change.items():
        target[k] = v
    w = target.copy()
    for _ in range(max_iter):
        freq = realized_order_frequencies(w, k_beams)
        if np.max(np.abs(freq - target)) <= tol:
            return w
        w = np.where(target > 0, w * target / np.where(freq > 0, freq, 1.0), 0.0)
        w /= w.sum()
    raise InfeasibleAdjacency("beam-change targets cannot be realized on this beam array")


class _Uniforms:
    """Block-buffered uniform draws from one generator."""

    def __init__(self, rng):
        self._rng = rng
        self._buf = np.empty(0)
        self._pos = 0

    def __call__(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self._rng.random(_BLOCK)
            self._pos = 0
        v = self._buf[self._pos]
        self._pos += 1
        return float(v)


class _Lengths:
    def __init__(self, p: GammaParams, rng):
        self._p = p
        self._rng = rng
        self._buf = []

    def __call__(self) -> float:
        if not self._buf:
            block = standard_gamma(self._p.shape, _BLOCK, self._rng) * self._p.scale
            self._buf = block.tolist()[::-1]
        return self._buf.pop()


def _pick(probs: Sequence[float], u: float) -> int:
    acc = 0.0
    last = 0
    for i, p in enumerate(probs):
        if p <= 0:
            continue
        acc += p
        last = i
        if u < acc:
            return i
    return last


class _BeamChain:
    def __init__(self, model: TransitionModel, uniform: _Uniforms, reflect: bool):
        self.n = model.n_beams
        self.uniform = uniform
        self.reflect = reflect
        self.target = [0.0] + [model.p_change_given_change[k] for k in range(1, self.n)]
        if reflect and self.n > 1:
            w = calibrate_order_weights(model)
            self.per_state = []
            for i in range(self.n):
                probs = [0.0] * self.n
                feas = _feasible_orders(i, self.n)
                z = sum(w[k] for k in feas)
                for k in feas:
                    probs[k] = w[k] / z
                self.per_state.append(probs)

    def next(self, i: int) -> int:
        u = self.uniform()
        k = _pick(self.per_state[i] if self.reflect else self.target, u)
        targets = [j for j in (i - k, i + k) if 0 <= j < self.n]
        if not targets:
            raise InfeasibleAdjacency(f"order {k} change impossible from beam index {i}")
        if len(targets) == 1:
            return targets[0]
        return targets[0] if self.uniform() < 0.5 else targets[1]


def _beam_sequence(n_samples: int, step: float, spec: SynthesisSpec, reflect: bool):
    rng = make_rng(spec.seed, BEAM_STREAM)
    uniform = _Uniforms(rng)
    lengths = _Lengths(spec.gamma, rng)
    n_beams = spec.transitions.n_beams
    chain = _BeamChain(spec.transitions, uniform, reflect) if n_beams > 1 else None

    beams = np.empty(n_samples, dtype=np.int64)
    current = min(int(uniform() * n_beams), n_beams - 1)
    m = 0
    drawn = []
    while m < n_samples:
        length = lengths()
        drawn.append(length)
        count = max(1, math.ceil(length / step))
        beams[m:m + count] = current
        m += count
        if m < n_samples and chain is not None:
            current = chain.next(current)
    return beams, drawn


def _rsrp_profile(lat, lon, step, spec: SynthesisSpec, bs: BaseStation, ue_height: float):
    ground = haversine_array(lat, lon, np.full_like(lat, bs.lat), np.full_like(lon, bs.lon))
    d3 = slant_distance(ground, bs.height, ue_height)
    rng = make_rng(spec.seed, SHADOWING_STREAM)
    shadow = correlated_shadowing(lat.size, step, spec.shadowing_sigma, spec.gamma.mean, rng)
    return spec.band.eirp - free_space_path_loss(d3, spec.band.center_frequency) - shadow


def synthesize_rsrp(traj: Trajectory, spec: SynthesisSpec, bs: Optional[BaseStation] = None,
                    ue_height: float = DEFAULT_UE_HEIGHT_M) -> DriveTrace:
    """Route samples carrying only RSRP = EIRP - FSPL(3-D distance) - shadowing.

    Shadowing is exponentially correlated along the path with decay length
    equal to the gamma SSR mean, a heuristic rather than a physical model.
    """
    bs = bs or default_base_station()
    s, lat, lon = traj.sample_positions()
    rsrp = _rsrp_profile(lat, lon, traj.step, spec, bs, ue_height)
    return DriveTrace(timestamp=s / traj.speed, lat=lat, lon=lon, rsrp=rsrp,
                      band_label=f"synthetic-{spec.band.center_frequency:g}MHz",
                      meta={"source": "synthetic", "seed": spec.seed})


def simulate_beam_trace(traj: Trajectory, spec: SynthesisSpec,
                        bs: Optional[BaseStation] = None, reflect: bool = True,
                        ue_height: float = DEFAULT_UE_HEIGHT_M) -> DriveTrace:
    """Synthetic drive trace with beam IDs (angle-order indices) and link-budget RSRP.

    ``meta`` records the number of segments drawn and their mean length.
    """
    bs = bs or default_base_station()
    s, lat, lon = traj.sample_positions()
    beams, drawn = _beam_sequence(s.size, traj.step, spec, reflect)
    rsrp = _rsrp_profile(lat, lon, traj.step, spec, bs, ue_height)
    meta = {
        "source": "synthetic",
        "seed": spec.seed,
        "segments": len(drawn),
        "mean_segment_length": math.fsum(drawn) / len(drawn),
    }
    return DriveTrace(timestamp=s / traj.speed, lat=lat, lon=lon, rsrp=rsrp, beam_id=beams,
                      band_label=f"synthetic-{spec.band.center_frequency:g}MHz", meta=meta)
