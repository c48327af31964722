"""Per-band system parameters and the two measured configurations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Mapping, Sequence

from ..errors import BandConfigError, BandwidthOverflow, UnsortedBeams


@dataclass(frozen=True)
class BandConfig:
    """Transmit-side parameters of one band.

    Units: ``center_frequency`` and ``bandwidth`` in MHz, ``eirp`` in dBm,
    ``scs`` (subcarrier spacing) in kHz, beamwidths and ``beam_angles``
    (azimuth central angles of the analog beams) in degrees.
    """

    center_frequency: float
    bandwidth: float
    eirp: float
    scs: float
    max_resource_blocks: int
    subcarriers_per_rb: int = 12
    h_beamwidth: float = 0.0
    v_beamwidth: float = 0.0
    beam_angles: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "beam_angles", tuple(float(a) for a in self.beam_angles))

    @property
    def occupied_bandwidth_hz(self) -> float:
        return self.max_resource_blocks * self.subcarriers_per_rb * self.scs * 1e3

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beam_angles"] = list(self.beam_angles)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "BandConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise BandConfigError(f"unknown band config keys: {sorted(extra)}")
        return cls(**d)


def validate_band_config(cfg: BandConfig) -> BandConfig:
    """Return ``cfg`` unchanged if the resource grid fits and the beam set is ordered."""
    for name in ("center_frequency", "bandwidth", "scs"):
        if not getattr(cfg, name) > 0:
            raise BandConfigError(f"{name} must be positive")
    if cfg.max_resource_blocks < 1 or cfg.subcarriers_per_rb < 1:
        raise BandConfigError("resource grid must be non-empty")
    # integer kHz arithmetic keeps 97.92 MHz vs 100 MHz free of rounding
    grid_khz = cfg.max_resource_blocks * cfg.subcarriers_per_rb * cfg.scs
    if grid_khz > cfg.bandwidth * 1e3:
        raise BandwidthOverflow(
            f"{cfg.max_resource_blocks} RB x {cfg.subcarriers_per_rb} x {cfg.scs:g} kHz = "
            f"{grid_khz / 1e3:g} MHz exceeds {cfg.bandwidth:g} MHz")
    angles = cfg.beam_angles
    if not angles:
        raise UnsortedBeams("beam_angles is empty")
    if any(b <= a for a, b in zip(angles, angles[1:])):
        raise UnsortedBeams(f"beam_angles {list(angles)} not strictly ascending")
    return cfg


def preset_document() -> dict:
    """The shipped presets file: both band configurations plus reference model values."""
    text = resources.files("beamssr").joinpath("data/presets.json").read_text("utf-8")
    return json.loads(text)


def load_presets() -> dict[str, BandConfig]:
    return {name: BandConfig.from_dict(d) for name, d in preset_document()["bands"].items()}


def mmwave_table2(bandwidth: float = 100.0) -> BandConfig:
    """The measured 27.05 GHz system; 68 resource blocks per 100 MHz of bandwidth."""
    base = load_presets()["mmwave_table2"]
    rbs = round(base.max_resource_blocks * bandwidth / base.bandwidth)
    return BandConfig(**{**base.to_dict(), "bandwidth": bandwidth, "max_resource_blocks": rbs})


def cband_table2() -> BandConfig:
    return load_presets()["cband_table2"]


def resolve_band(spec) -> BandConfig:
    """Accept a preset name, a dict, or a BandConfig."""
    if isinstance(spec, BandConfig):
        return spec
    if isinstance(spec, str):
        presets = load_presets()
        if spec not in presets:
            raise BandConfigError(f"unknown band preset {spec!r}; have {sorted(presets)}")
        return presets[spec]
    if isinstance(spec, Mapping):
        if "preset" in spec:
            base = resolve_band(spec["preset"]).to_dict()
            base.update({k: v for k, v in spec.items() if k != "preset"})
            return BandConfig.from_dict(base)
        return BandConfig.from_dict(spec)
    raise BandConfigError(f"cannot interpret band config of type {type(spec).__name__}")


def beam_angles_of(cfg_or_angles) -> Sequence[float]:
    if isinstance(cfg_or_angles, BandConfig):
        return cfg_or_angles.beam_angles
    return tuple(float(a) for a in cfg_or_angles)
