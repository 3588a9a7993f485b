"""Counter-based random streams.

Every random draw in the package comes from a Philox-4x64 generator whose
128-bit key is ``(seed, stream)``; the 256-bit counter starts at zero and
advances with each draw.  A stream is therefore identified by the pair
``(seed, stream)`` and the position inside it by the counter, which makes
results bit-reproducible regardless of how many other streams exist.

Per-trial experiments use ``seed = base_seed + trial`` so adding trials never
perturbs earlier ones.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# Stream tags.  Fixed forever: changing one changes every published number.
GRAPH = 0
NB_WALK = 1
SIMPLE_WALK = 2
BINS = 3
DECORATION = 4
STARTS = 5


def stream(seed: int, tag: int) -> np.random.Generator:
    """Generator for stream ``tag`` of ``seed`` (seed reduced modulo 2**64)."""
    key = np.array([int(seed) & MASK64, int(tag) & MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
