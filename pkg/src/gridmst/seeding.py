"""Deterministic per-sample random generators.

Every randomized routine keys its generator on (seed, sample index)
through numpy's SeedSequence, so splitting a batch across threads,
processes, or machines cannot change the stream any individual sample
sees. The generator algorithm is pinned to PCG64 for cross-platform
reproducibility.
"""

from __future__ import annotations

import numpy as np


def sample_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for sample `index` of a batch keyed by `seed`."""
    if seed < 0:
        raise ValueError("seed must be >= 0")
    if index < 0:
        raise ValueError("sample index must be >= 0")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))
