"""Temporal averaging of samples recorded while the test vehicle stood still."""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from ..errors import EmptyTrace
from .geo import haversine_distance
from .model import MISSING_INT, DriveTrace

DEFAULT_CLUSTER_RADIUS_M = 1.0


def _db_power_mean(values):
    lin = [10.0 ** (v / 10.0) for v in values]
    return 10.0 * math.log10(math.fsum(lin) / len(lin))


def _mode_earliest(values):
    counts = Counter(values)
    best = max(counts.values())
    return next(v for v in values if counts[v] == best)


def _mode_smallest(values):
    counts = Counter(values)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)


def _group_pass(clusters, centroids, radius):
    """One left-to-right grouping pass; returns merged member lists."""
    groups = []
    anchor = None
    for members, c in zip(clusters, centroids):
        if anchor is not None and haversine_distance(anchor, c) <= radius:
            groups[-1].extend(members)
        else:
            groups.append(list(members))
            anchor = c
    return groups


def collapse_static_clusters(trace: DriveTrace, radius: float = DEFAULT_CLUSTER_RADIUS_M) -> DriveTrace:
    """Average maximal runs of consecutive co-located samples into one sample each.

    A run is a maximal stretch of consecutive received samples whose positions
    all lie within ``radius`` meters of the run's first position. Each run
    becomes one sample at the centroid, stamped at the midpoint of its time
    span. RSRP and SNR are averaged in linear power and converted back to dB,
    throughput arithmetically; beam_id takes the mode (earliest value wins a
    tie) and rank the mode (smallest wins). Lost-packet samples are skipped
    when forming runs and are passed through untouched.

    Grouping is repeated on run centroids until nothing merges, which makes
    the operation idempotent.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    n = len(trace)
    if n == 0:
        raise EmptyTrace("cannot collapse an empty trace")

    lat = trace.lat.tolist()
    lon = trace.lon.tolist()
    present = np.flatnonzero(~trace.lost_mask).tolist()

    clusters = [[i] for i in present]
    centroids = [(lat[i], lon[i]) for i in present]
    while True:
        groups = _group_pass(clusters, centroids, radius)
        if len(groups) == len(clusters):
            break
        clusters = groups
        centroids = [(math.fsum(lat[i] for i in g) / len(g), math.fsum(lon[i] for i in g) / len(g))
                     for g in groups]

    ts = trace.timestamp.tolist()
    rsrp, snr, thr = trace.rsrp.tolist(), trace.snr.tolist(), trace.throughput.tolist()
    beam, rank = trace.beam_id.tolist(), trace.rank.tolist()

    rows = []
    for members, (clat, clon) in zip(clusters, centroids):
        first = members[0]
        if len(members) == 1:
            rows.append((first, ts[first], lat[first], lon[first], rsrp[first], snr[first],
                         beam[first], rank[first], thr[first]))
            continue
        snrs = [snr[i] for i in members if not math.isnan(snr[i])]
        thrs = [thr[i] for i in members if not math.isnan(thr[i])]
        beams = [beam[i] for i in members if beam[i] != MISSING_INT]
        ranks = [rank[i] for i in members if rank[i] != MISSING_INT]
        rows.append((
            first,
            (ts[first] + ts[members[-1]]) / 2.0,
            clat, clon,
            _db_power_mean([rsrp[i] for i in members]),
            _db_power_mean(snrs) if snrs else math.nan,
            _mode_earliest(beams) if beams else MISSING_INT,
            _mode_smallest(ranks) if ranks else MISSING_INT,
            math.fsum(thrs) / len(thrs) if thrs else math.nan,
        ))
    for i in np.flatnonzero(trace.lost_mask).tolist():
        rows.append((i, ts[i], lat[i], lon[i], math.nan, math.nan, MISSING_INT, MISSING_INT,
                     math.nan))

    rows.sort(key=lambda r: (r[1], r[0]))
    cols = list(zip(*rows))
    return DriveTrace(
        timestamp=cols[1], lat=cols[2], lon=cols[3], rsrp=cols[4], snr=cols[5],
        beam_id=cols[6], rank=cols[7], throughput=cols[8],
        band_label=trace.band_label, meta=trace.meta,
    )
