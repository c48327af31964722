"""Beam-change statistics by adjacency order.

Beams are ordered by azimuth central angle; the adjacency order of a change
is the index distance between the old and new beam in that ordering. Given a
change, the probability that it lands on the k-th adjacent beam is

    P[change to order k] = P[change to order k and change] / P[change]

which with counts is simply ``counts[k] / sum(counts)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ..errors import FitError, NoTransitions
from ..trace.model import MISSING_INT, DriveTrace

MEASURED_CHANGE_PROBABILITIES = {1: 0.63, 2: 0.06, 3: 0.31}


@dataclass(frozen=True)
class TransitionModel:
    beam_angles: tuple
    p_change_given_change: dict
    counts: dict = field(default_factory=dict)
    p_stay: Optional[float] = None

    def __post_init__(self):
        angles = tuple(float(a) for a in self.beam_angles)
        if not angles or any(b <= a for a, b in zip(angles, angles[1:])):
            raise FitError("beam_angles must be non-empty and strictly ascending")
        object.__setattr__(self, "beam_angles", angles)
        orders = range(1, len(angles))
        p = {int(k): float(v) for k, v in self.p_change_given_change.items()}
        if set(p) - set(orders):
            raise FitError(f"adjacency orders {sorted(set(p) - set(orders))} impossible "
                           f"with {len(angles)} beams")
        p = {k: p.get(k, 0.0) for k in orders}
        if any(not 0.0 <= v <= 1.0 for v in p.values()):
            raise FitError("probabilities must lie in [0, 1]")
        if p and abs(math.fsum(p.values()) - 1.0) > 1e-12:
            raise FitError(f"change probabilities sum to {math.fsum(p.values())!r}, not 1")
        object.__setattr__(self, "p_change_given_change", p)
        object.__setattr__(self, "counts", {k: int(self.counts.get(k, 0)) for k in orders})

    @property
    def n_beams(self) -> int:
        return len(self.beam_angles)

    @classmethod
    def from_probabilities(cls, beam_angles: Sequence[float], probs: Mapping) -> "TransitionModel":
        return cls(tuple(beam_angles), {int(k): float(v) for k, v in probs.items()})

    def to_dict(self) -> dict:
        return {
            "beam_angles": list(self.beam_angles),
            "p_change_given_change": {str(k): v for k, v in self.p_change_given_change.items()},
            "counts": {str(k): v for k, v in self.counts.items()},
            "p_stay": self.p_stay,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "TransitionModel":
        return cls(tuple(d["beam_angles"]),
                   {int(k): v for k, v in d["p_change_given_change"].items()},
                   {int(k): v for k, v in d.get("counts", {}).items()},
                   d.get("p_stay"))


def beam_indices(beam_ids, beam_angles: Sequence[float], beam_map: Optional[Mapping] = None):
    """Map beam IDs to positions in the angle-sorted beam list.

    Without ``beam_map`` a beam ID is taken to be that position already.
    ``beam_map`` maps beam ID -> central angle in degrees.
    """
    angles = sorted(float(a) for a in beam_angles)
    ids = np.asarray(beam_ids, dtype=np.int64)
    if beam_map is None:
        if np.any((ids < 0) | (ids >= len(angles))):
            raise FitError(f"beam IDs must index the {len(angles)} configured beams")
        return ids
    position = {float(a): i for i, a in enumerate(angles)}
    lut = {}
    for bid, ang in beam_map.items():
        if float(ang) not in position:
            raise FitError(f"beam {bid} angle {ang} is not in beam_angles")
        lut[int(bid)] = position[float(ang)]
    try:
        return np.array([lut[int(b)] for b in ids.tolist()], dtype=np.int64)
    except KeyError as exc:
        raise FitError(f"beam ID {exc.args[0]} missing from beam_map") from None


def _index_pairs(trace: DriveTrace, beam_angles, beam_map, strict_beams):
    has_beam = trace.beam_id != MISSING_INT
    if strict_beams:
        both = has_beam[:-1] & has_beam[1:]
        src = trace.beam_id[:-1][both]
        dst = trace.beam_id[1:][both]
        return beam_indices(src, beam_angles, beam_map), beam_indices(dst, beam_angles, beam_map)
    idx = beam_indices(trace.beam_id[has_beam], beam_angles, beam_map)
    return idx[:-1], idx[1:]


def estimate_transition_model(trace: DriveTrace, beam_angles: Sequence[float],
                              beam_map: Optional[Mapping] = None,
                              strict_beams: bool = False) -> TransitionModel:
    """Count beam changes between consecutive beam-bearing samples by adjacency order.

    Raises:
        NoTransitions: no change was observed (``counts`` attached to the error).
    """
    angles = tuple(sorted(float(a) for a in beam_angles))
    src, dst = _index_pairs(trace, angles, beam_map, strict_beams)
    orders = np.abs(dst - src)
    n_pairs = int(orders.size)
    hist = np.bincount(orders, minlength=len(angles)) if n_pairs else np.zeros(len(angles), int)
    counts = {k: int(hist[k]) for k in range(1, len(angles))}
    n_changes = sum(counts.values())
    if n_changes == 0:
        raise NoTransitions("no beam change observed", counts)
    probs = {k: c / n_changes for k, c in counts.items()}
    p_stay = int(hist[0]) / n_pairs
    return TransitionModel(angles, probs, counts, p_stay)


def conditional_change_probability(m: TransitionModel, k: int) -> float:
    """Probability that a beam change goes to the k-th adjacent beam."""
    if not m.p_change_given_change:
        raise NoTransitions("model holds no transitions", m.counts)
    if k not in m.p_change_given_change:
        raise FitError(f"adjacency order {k} impossible with {m.n_beams} beams")
    return m.p_change_given_change[k]
