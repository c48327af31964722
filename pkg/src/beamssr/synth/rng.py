"""Seeded generator construction.

Every generator is numpy's Philox4x64 counter-based bit generator, keyed
from ``SeedSequence(seed, spawn_key=(stream,))``. Distinct ``stream``
numbers give statistically independent substreams for one seed, so e.g.
beam selection and shadowing never share state.
"""

from __future__ import annotations

import numpy as np

BEAM_STREAM = 0
SHADOWING_STREAM = 1
SAMPLES_STREAM = 2


def make_rng(seed: int, stream: int = SAMPLES_STREAM) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def as_rng(seed_or_rng, stream: int = SAMPLES_STREAM) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return make_rng(seed_or_rng, stream)
