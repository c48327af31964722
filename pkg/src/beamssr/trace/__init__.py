"""Measurement model, CSV ingestion, geodesy and static-cluster preprocessing."""

from .band import (BandConfig, cband_table2, load_presets, mmwave_table2, preset_document, resolve_band,
                   validate_band_config)
from .clusters import DEFAULT_CLUSTER_RADIUS_M, collapse_static_clusters
from .csvio import CANONICAL_COLUMNS, parse_trace, read_trace, serialize_trace
from .geo import EARTH_RADIUS_M, haversine_array, haversine_distance, interpolate_path, path_legs
from .model import MISSING_INT, DriveSample, DriveTrace

__all__ = [
    "BandConfig", "CANONICAL_COLUMNS", "DEFAULT_CLUSTER_RADIUS_M", "DriveSample", "DriveTrace",
    "EARTH_RADIUS_M", "MISSING_INT", "cband_table2", "collapse_static_clusters",
    "haversine_array", "haversine_distance", "interpolate_path", "load_presets",
    "mmwave_table2", "parse_trace", "path_legs", "read_trace", "resolve_band",
    "serialize_trace", "validate_band_config",
]
