"""Canonical trace CSV reading and writing.

Canonical column order::

    timestamp,lat,lon,rsrp_dbm,snr_db,beam_id,rank,throughput_mbps

Empty cell means absent. Floats are written with ``repr`` (shortest
round-trip form), so parse -> write -> parse -> write is byte-stable.
"""

from __future__ import annotations

import csv
import io
import math
from typing import IO, Mapping, Optional, Union

import numpy as np

from ..errors import EmptyTrace, MalformedRow, MissingColumn
from .model import MISSING_INT, DriveTrace, _check_sample

CANONICAL_COLUMNS = ("timestamp", "lat", "lon", "rsrp_dbm", "snr_db", "beam_id", "rank",
                     "throughput_mbps")
REQUIRED_COLUMNS = ("timestamp", "lat", "lon")

# canonical column -> DriveTrace attribute
_ATTR = {
    "timestamp": "timestamp", "lat": "lat", "lon": "lon", "rsrp_dbm": "rsrp",
    "snr_db": "snr", "beam_id": "beam_id", "rank": "rank", "throughput_mbps": "throughput",
}
_INT_COLUMNS = {"beam_id", "rank"}


def _decode(raw) -> str:
    if isinstance(raw, (bytes, bytearray)):
        return bytes(raw).decode("utf-8-sig")
    if isinstance(raw, str):
        return raw.lstrip("﻿")
    data = raw.read()
    return _decode(data)


def _parse_float(cell, column, row):
    try:
        v = float(cell)
    except ValueError:
        raise MalformedRow(row, f"{column}: {cell!r} is not a number") from None
    if not math.isfinite(v):
        raise MalformedRow(row, f"{column}: {cell!r} is not finite")
    return v


def _parse_int(cell, column, row):
    try:
        return int(cell)
    except ValueError:
        raise MalformedRow(row, f"{column}: {cell!r} is not an integer") from None


def parse_trace(raw: Union[bytes, str, IO], schema: Optional[Mapping[str, str]] = None,
                band_label: str = "", source: Optional[str] = None) -> DriveTrace:
    """Parse a drive-test CSV into a :class:`DriveTrace`.

    ``schema`` maps canonical column names to the column headers actually used
    in the file; unmapped canonical names are looked up verbatim. Optional
    columns may be missing entirely. Rows are re-sorted by timestamp with a
    stable sort, so samples sharing a timestamp keep their file order.

    Raises:
        MissingColumn: a required column is absent from the header.
        MalformedRow: a cell does not parse, or a row breaks a sample invariant.
        EmptyTrace: the file has no data rows.
    """
    schema = dict(schema or {})
    unknown = set(schema) - set(CANONICAL_COLUMNS)
    if unknown:
        raise ValueError(f"schema maps unknown canonical columns: {sorted(unknown)}")
    reader = csv.reader(io.StringIO(_decode(raw), newline=""))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyTrace("input has no header row") from None

    positions = {}
    for col in CANONICAL_COLUMNS:
        name = schema.get(col, col)
        if name in header:
            positions[col] = header.index(name)
        elif col in REQUIRED_COLUMNS:
            raise MissingColumn(name)

    columns = {col: [] for col in CANONICAL_COLUMNS}
    for row_no, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) < len(header):
            cells = cells + [""] * (len(header) - len(cells))
        elif len(cells) > len(header):
            raise MalformedRow(row_no, f"{len(cells)} cells for {len(header)} header columns")
        values = {}
        for col in CANONICAL_COLUMNS:
            cell = cells[positions[col]].strip() if col in positions else ""
            if cell == "":
                if col in REQUIRED_COLUMNS:
                    raise MalformedRow(row_no, f"{col} is empty")
                values[col] = None
            elif col in _INT_COLUMNS:
                values[col] = _parse_int(cell, col, row_no)
            else:
                values[col] = _parse_float(cell, col, row_no)
        reason = _check_sample(values["timestamp"], values["lat"], values["lon"],
                               values["rsrp_dbm"], values["snr_db"], values["beam_id"],
                               values["rank"], values["throughput_mbps"])
        if reason:
            raise MalformedRow(row_no, reason)
        for col, v in values.items():
            columns[col].append(v)

    if not columns["timestamp"]:
        raise EmptyTrace("input has no data rows")

    def fcol(col):
        return np.array([np.nan if v is None else v for v in columns[col]], dtype=float)

    def icol(col):
        return np.array([MISSING_INT if v is None else v for v in columns[col]], dtype=np.int64)

    ts = np.array(columns["timestamp"], dtype=float)
    order = np.argsort(ts, kind="stable")
    trace = DriveTrace(
        timestamp=ts[order], lat=fcol("lat")[order], lon=fcol("lon")[order],
        rsrp=fcol("rsrp_dbm")[order], snr=fcol("snr_db")[order],
        beam_id=icol("beam_id")[order], rank=icol("rank")[order],
        throughput=fcol("throughput_mbps")[order],
        band_label=band_label, meta={"source": source} if source else {},
    )
    return trace


def _fmt_float(v) -> str:
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def _fmt_int(v) -> str:
    v = int(v)
    return "" if v == MISSING_INT else str(v)


def serialize_trace(trace: DriveTrace) -> bytes:
    """Canonical UTF-8 CSV bytes with LF line endings."""
    lines = [",".join(CANONICAL_COLUMNS)]
    cols = [getattr(trace, _ATTR[c]).tolist() for c in CANONICAL_COLUMNS]
    fmts = [_fmt_int if c in _INT_COLUMNS else _fmt_float for c in CANONICAL_COLUMNS]
    for row in zip(*cols):
        lines.append(",".join(f(v) for f, v in zip(fmts, row)))
    return ("\n".join(lines) + "\n").encode("utf-8")


def read_trace(path, schema=None, band_label: str = "") -> DriveTrace:
    with open(path, "rb") as fh:
        return parse_trace(fh.read(), schema=schema, band_label=band_label, source=str(path))
