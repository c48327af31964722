"""Measurement data model.

A :class:`DriveTrace` is stored column-wise (one numpy array per field) so
that million-sample synthetic routes stay cheap; :class:`DriveSample` is the
row view. Absent values are ``NaN`` in float columns and ``-1`` in the integer
``beam_id`` / ``rank`` columns. A sample without RSRP is a lost packet and
carries only time and position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..errors import EmptyTrace, TraceError

MISSING_INT = -1

FLOAT_FIELDS = ("rsrp", "snr", "throughput")
INT_FIELDS = ("beam_id", "rank")


def _check_sample(timestamp, lat, lon, rsrp, snr, beam_id, rank, throughput):
    """Return a reason string when a sample violates an invariant, else None."""
    if not math.isfinite(timestamp):
        return "timestamp is not finite"
    if not (math.isfinite(lat) and -90.0 <= lat <= 90.0):
        return f"latitude {lat} outside [-90, 90]"
    if not (math.isfinite(lon) and -180.0 <= lon <= 180.0):
        return f"longitude {lon} outside [-180, 180]"
    for name, v in (("rsrp", rsrp), ("snr", snr), ("throughput", throughput)):
        if v is not None and not math.isfinite(v):
            return f"{name} is not finite"
    if rsrp is None:
        present = [n for n, v in (("snr", snr), ("beam_id", beam_id), ("rank", rank),
                                  ("throughput", throughput)) if v is not None]
        if present:
            return "lost-packet sample (no rsrp) carries " + ", ".join(present)
    if beam_id is not None and beam_id < 0:
        return f"beam_id {beam_id} is negative"
    if rank is not None and rank < 1:
        return f"rank {rank} is below 1"
    if throughput is not None and throughput < 0:
        return f"throughput {throughput} is negative"
    return None


@dataclass(frozen=True)
class DriveSample:
    """One GPS-stamped radio measurement."""

    timestamp: float
    lat: float
    lon: float
    rsrp: Optional[float] = None
    snr: Optional[float] = None
    beam_id: Optional[int] = None
    rank: Optional[int] = None
    throughput: Optional[float] = None

    def __post_init__(self):
        reason = _check_sample(self.timestamp, self.lat, self.lon, self.rsrp, self.snr,
                               self.beam_id, self.rank, self.throughput)
        if reason:
            raise TraceError(reason)

    @property
    def lost(self) -> bool:
        return self.rsrp is None

    @property
    def position(self) -> tuple[float, float]:
        return (self.lat, self.lon)


def _as_float_column(values, n):
    if values is None:
        return np.full(n, np.nan)
    return np.array(values, dtype=float)


def _as_int_column(values, n):
    if values is None:
        return np.full(n, MISSING_INT, dtype=np.int64)
    return np.array(values, dtype=np.int64)


class DriveTrace:
    """Ordered sequence of drive-test samples, stored column-wise and read-only."""

    __slots__ = ("timestamp", "lat", "lon", "rsrp", "snr", "beam_id", "rank",
                 "throughput", "band_label", "meta")

    def __init__(self, timestamp, lat, lon, rsrp=None, snr=None, beam_id=None,
                 rank=None, throughput=None, band_label: str = "",
                 meta: Optional[Mapping] = None, validate: bool = True):
        ts = np.array(timestamp, dtype=float)
        n = ts.size
        cols = {
            "timestamp": ts,
            "lat": np.array(lat, dtype=float),
            "lon": np.array(lon, dtype=float),
            "rsrp": _as_float_column(rsrp, n),
            "snr": _as_float_column(snr, n),
            "beam_id": _as_int_column(beam_id, n),
            "rank": _as_int_column(rank, n),
            "throughput": _as_float_column(throughput, n),
        }
        for name, arr in cols.items():
            if arr.shape != (n,):
                raise TraceError(f"column {name} has shape {arr.shape}, expected ({n},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "band_label", band_label)
        object.__setattr__(self, "meta", dict(meta or {}))
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("DriveTrace is immutable")

    def _validate(self):
        if not np.all(np.isfinite(self.timestamp)):
            raise TraceError("timestamps must be finite")
        if np.any(np.diff(self.timestamp) < 0):
            raise TraceError("timestamps must be non-decreasing")
        if np.any(~np.isfinite(self.lat) | (np.abs(self.lat) > 90.0)):
            raise TraceError("latitude outside [-90, 90]")
        if np.any(~np.isfinite(self.lon) | (np.abs(self.lon) > 180.0)):
            raise TraceError("longitude outside [-180, 180]")
        lost = np.isnan(self.rsrp)
        carried = (~np.isnan(self.snr) | (self.beam_id != MISSING_INT)
                   | (self.rank != MISSING_INT) | ~np.isnan(self.throughput))
        if np.any(lost & carried):
            raise TraceError("lost-packet samples may carry only time and position")
        if np.any(self.beam_id < MISSING_INT):
            raise TraceError("beam_id must be non-negative")
        if np.any((self.rank != MISSING_INT) & (self.rank < 1)):
            raise TraceError("rank must be at least 1")
        if np.any(self.throughput < 0):
            raise TraceError("throughput must be non-negative")

    @classmethod
    def from_samples(cls, samples: Iterable[DriveSample], band_label: str = "",
                     meta: Optional[Mapping] = None) -> "DriveTrace":
        samples = list(samples)

        def fcol(name):
            return [np.nan if getattr(s, name) is None else getattr(s, name) for s in samples]

        def icol(name):
            return [MISSING_INT if getattr(s, name) is None else getattr(s, name) for s in samples]

        return cls(
            timestamp=[s.timestamp for s in samples],
            lat=[s.lat for s in samples],
            lon=[s.lon for s in samples],
            rsrp=fcol("rsrp"), snr=fcol("snr"), beam_id=icol("beam_id"),
            rank=icol("rank"), throughput=fcol("throughput"),
            band_label=band_label, meta=meta,
        )

    def replace(self, **columns) -> "DriveTrace":
        """Copy with some columns (or ``band_label`` / ``meta``) swapped out."""
        kwargs = {name: getattr(self, name) for name in self.__slots__}
        kwargs.update(columns)
        return DriveTrace(**kwargs)

    def take(self, index) -> "DriveTrace":
        """Sub-trace at the given integer indices or boolean mask, keeping labels."""
        cols = {name: getattr(self, name)[index] for name in
                ("timestamp", "lat", "lon", "rsrp", "snr", "beam_id", "rank", "throughput")}
        return DriveTrace(**cols, band_label=self.band_label, meta=self.meta)

    def __len__(self):
        return int(self.timestamp.size)

    def __getitem__(self, i) -> DriveSample:
        def f(arr):
            v = float(arr[i])
            return None if math.isnan(v) else v

        def k(arr):
            v = int(arr[i])
            return None if v == MISSING_INT else v

        return DriveSample(float(self.timestamp[i]), float(self.lat[i]), float(self.lon[i]),
                           f(self.rsrp), f(self.snr), k(self.beam_id), k(self.rank),
                           f(self.throughput))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def samples(self) -> Sequence[DriveSample]:
        return [self[i] for i in range(len(self))]

    @property
    def lost_mask(self) -> np.ndarray:
        return np.isnan(self.rsrp)

    @property
    def n_lost(self) -> int:
        return int(np.count_nonzero(self.lost_mask))

    @property
    def loss_fraction(self) -> float:
        if len(self) == 0:
            raise EmptyTrace("trace has no samples")
        return self.n_lost / len(self)

    def __repr__(self):
        return (f"DriveTrace(n={len(self)}, lost={self.n_lost}, "
                f"band_label={self.band_label!r})")
