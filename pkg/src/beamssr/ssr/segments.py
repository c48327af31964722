"""Spatial stationarity region extraction from beam-ID sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from ..errors import FitError, NoBeamData
from ..trace.geo import path_legs
from ..trace.model import MISSING_INT, DriveTrace


@dataclass(frozen=True)
class SsrSampleSet:
    """No-beam-change distances in meters plus an audit of runs too short to measure."""

    distances: tuple
    zero_length_runs: int
    total_runs: int
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(float(d) for d in self.distances))
        if any(not d > 0 for d in self.distances):
            raise FitError("SSR distances must be strictly positive")
        if self.total_runs != len(self.distances) + self.zero_length_runs:
            raise FitError("total_runs must equal len(distances) + zero_length_runs")

    def __len__(self):
        return len(self.distances)

    def as_array(self) -> np.ndarray:
        return np.array(self.distances)

    def to_csv(self) -> bytes:
        lines = ["distance_m"] + [repr(d) for d in self.distances]
        return ("\n".join(lines) + "\n").encode("utf-8")


class BeamRun(NamedTuple):
    beam_id: int
    first: int
    last: int
    n_samples: int
    distance: float


def iter_beam_runs(trace: DriveTrace, strict_beams: bool = False) -> Iterator[BeamRun]:
    """Single pass over the trace yielding maximal runs of one beam ID.

    Samples without a beam ID are skipped, and the along-path distance keeps
    accumulating through them, unless ``strict_beams`` is set, in which case
    such a sample ends the current run. Each run distance is the exactly
    rounded sum (``math.fsum``) of the haversine legs from the run's first to
    its last sample.
    """
    beams = trace.beam_id.tolist()
    legs = path_legs(trace.lat, trace.lon).tolist()
    run_beam = None
    first = last = 0
    count = 0
    run_legs = []
    pending = []
    for i, b in enumerate(beams):
        if run_beam is not None and i > 0:
            pending.append(legs[i - 1])
        if b == MISSING_INT:
            if strict_beams and run_beam is not None:
                yield BeamRun(run_beam, first, last, count, math.fsum(run_legs))
                run_beam = None
            continue
        if b == run_beam:
            run_legs.extend(pending)
            pending.clear()
            last = i
            count += 1
            continue
        if run_beam is not None:
            yield BeamRun(run_beam, first, last, count, math.fsum(run_legs))
        run_beam, first, last, count = b, i, i, 1
        run_legs = []
        pending.clear()
    if run_beam is not None:
        yield BeamRun(run_beam, first, last, count, math.fsum(run_legs))


def extract_ssr_segments(trace: DriveTrace, strict_beams: bool = False) -> SsrSampleSet:
    """Distances over which consecutive samples stay on one beam.

    Runs of a single sample, and multi-sample runs that never move, count as
    zero-length runs: they are tallied but excluded from ``distances`` since
    the gamma model lives on x > 0.

    Raises:
        NoBeamData: no sample carries a beam ID.
    """
    if not np.any(trace.beam_id != MISSING_INT):
        raise NoBeamData("trace has no beam IDs")
    distances = []
    zero = 0
    for run in iter_beam_runs(trace, strict_beams=strict_beams):
        if run.n_samples >= 2 and run.distance > 0:
            distances.append(run.distance)
        else:
            zero += 1
    source = dict(trace.meta)
    if trace.band_label:
        source["band_label"] = trace.band_label
    return SsrSampleSet(tuple(distances), zero, len(distances) + zero, source)
