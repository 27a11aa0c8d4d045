"""Deterministic random-number generation.

All sampling in this package goes through Philox4x64, a counter-based bit
generator (numpy's implementation). Streams are split by key, not by
jumping: ``make_rng(seed, stream)`` keys the generator with the 128-bit
pair ``(seed, stream)``, so independent streams can be drawn concurrently
and still reproduce bit-identically for a given (seed, stream) pair.

Stream ids used by the generators in this package:

====  =========================================
  0   primary draws (radial factors, parameters)
  1   noise / error draws
  2   auxiliary draws (radii, mixture selectors)
====  =========================================
"""

import numpy as np


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Return a Generator over Philox4x64 keyed by (seed, stream)."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    key = np.array([np.uint64(seed), np.uint64(stream)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
