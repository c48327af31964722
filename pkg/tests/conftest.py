import math

import numpy as np
import pytest

from beamssr.trace import DriveTrace, EARTH_RADIUS_M

ORIGIN = (-36.8414, 174.7553)
METERS_PER_DEG_LAT = EARTH_RADIUS_M * math.pi / 180.0

_ACCEPTANCE = []


def meridian_trace(positions_m, beams=None, **columns):
    """Samples due north of ORIGIN at the given along-path distances (meters)."""
    pos = np.asarray(positions_m, dtype=float)
    n = pos.size
    lat = ORIGIN[0] + pos / METERS_PER_DEG_LAT
    lon = np.full(n, ORIGIN[1])
    if beams is not None:
        beams = [-1 if b is None else b for b in beams]
        columns.setdefault("rsrp", np.full(n, -80.0))
    return DriveTrace(timestamp=np.arange(n, dtype=float), lat=lat, lon=lon,
                      beam_id=beams, **columns)


@pytest.fixture
def criterion(request):
    """Record one acceptance line per test; printed in the terminal summary."""
    state = {}

    def record(label, ok, detail=""):
        state.update(label=label, ok=bool(ok), detail=detail)
        return ok

    yield record
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed and state.get("ok", False)
    label = state.get("label", request.node.name)
    _ACCEPTANCE.append((label, passed, state.get("detail", "")))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
