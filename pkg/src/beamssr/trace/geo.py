"""Spherical-earth geodesy for drive-test routes."""

from __future__ import annotations

import math

import numpy as np

EARTH_RADIUS_M = 6371008.8


def haversine_distance(a, b):
    """Great-circle distance in meters between two ``(lat, lon)`` points in degrees."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    h = (math.sin((lat2 - lat1) / 2.0) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2)
    # rounding can push h a hair above 1 for antipodes
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(min(1.0, h)))


def haversine_array(lat1, lon1, lat2, lon2):
    """Vectorized :func:`haversine_distance` over numpy arrays (degrees in, meters out)."""
    lat1, lon1, lat2, lon2 = (np.radians(np.asarray(v, dtype=float)) for v in (lat1, lon1, lat2, lon2))
    h = (np.sin((lat2 - lat1) / 2.0) ** 2
         + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2.0) ** 2)
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.minimum(1.0, h)))


def path_legs(lat, lon):
    """Distances between consecutive points; length ``len(lat) - 1``."""
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    if lat.size < 2:
        return np.zeros(0)
    return haversine_array(lat[:-1], lon[:-1], lat[1:], lon[1:])


def _to_unit(lat, lon):
    la, lo = np.radians(lat), np.radians(lon)
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)], axis=-1)


def _from_unit(v):
    lat = np.degrees(np.arctan2(v[..., 2], np.hypot(v[..., 0], v[..., 1])))
    lon = np.degrees(np.arctan2(v[..., 1], v[..., 0]))
    return lat, lon


def interpolate_path(waypoints, distances):
    """Positions at the given along-path distances (meters) over a polyline of waypoints.

    Each leg is traversed along its great circle, so consecutive outputs on one
    leg are separated by exactly the requested path distance (up to rounding).
    Distances beyond the end clamp to the last waypoint.
    """
    wp = np.asarray(waypoints, dtype=float)
    s = np.asarray(distances, dtype=float)
    legs = path_legs(wp[:, 0], wp[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(legs)])
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(legs) - 1)
    leg_len = legs[idx]
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(leg_len > 0, (s - cum[idx]) / leg_len, 0.0)
    frac = np.clip(frac, 0.0, 1.0)

    units = _to_unit(wp[:, 0], wp[:, 1])
    p0, p1 = units[idx], units[idx + 1]
    omega = leg_len / EARTH_RADIUS_M
    sin_omega = np.sin(omega)
    small = sin_omega < 1e-12
    with np.errstate(invalid="ignore", divide="ignore"):
        w0 = np.where(small, 1.0 - frac, np.sin((1.0 - frac) * omega) / sin_omega)
        w1 = np.where(small, frac, np.sin(frac * omega) / sin_omega)
    lat, lon = _from_unit(w0[:, None] * p0 + w1[:, None] * p1)
    return lat, lon


def destination_point(origin, bearing_deg, distance_m):
    """Point reached from ``origin`` travelling ``distance_m`` along an initial bearing."""
    lat1, lon1 = math.radians(origin[0]), math.radians(origin[1])
    brg = math.radians(bearing_deg)
    delta = distance_m / EARTH_RADIUS_M
    lat2 = math.asin(math.sin(lat1) * math.cos(delta)
                     + math.cos(lat1) * math.sin(delta) * math.cos(brg))
    lon2 = lon1 + math.atan2(math.sin(brg) * math.sin(delta) * math.cos(lat1),
                             math.cos(delta) - math.sin(lat1) * math.sin(lat2))
    lon2 = (lon2 + math.pi) % (2 * math.pi) - math.pi
    return math.degrees(lat2), math.degrees(lon2)
