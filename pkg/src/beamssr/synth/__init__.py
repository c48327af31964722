"""Synthetic beam traces and the auxiliary link-budget layer."""

from .linkbudget import BaseStation, correlated_shadowing, free_space_path_loss, slant_distance
from .rng import make_rng
from .sampling import generate_ssr_samples, standard_gamma
from .simulate import (SynthesisSpec, Trajectory, calibrate_order_weights, default_base_station,
                       realized_order_frequencies, simulate_beam_trace, synthesize_rsrp)

__all__ = [
    "BaseStation", "SynthesisSpec", "Trajectory", "calibrate_order_weights",
    "correlated_shadowing", "default_base_station", "free_space_path_loss",
    "generate_ssr_samples", "make_rng", "realized_order_frequencies", "simulate_beam_trace",
    "slant_distance", "standard_gamma", "synthesize_rsrp",
]
