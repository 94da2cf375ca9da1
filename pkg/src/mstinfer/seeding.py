"""Seed derivation.

All randomness flows through numpy's PCG64 generator seeded by a
``SeedSequence`` built from a tuple of non-negative integers. A replication's
streams are keyed by ``(master_seed, replication, stream tag[, index])`` so
any replication or bootstrap round can be recomputed in isolation.
"""

from __future__ import annotations

import numpy as np

# stream tags
GRAPH = 0
ORDERING = 1
SAMPLE = 2
BOOTSTRAP = 3


def derive(*parts: int) -> np.random.SeedSequence:
    for p in parts:
        if int(p) < 0:
            raise ValueError(f"seed components must be non-negative, got {p}")
    return np.random.SeedSequence([int(p) for p in parts])


def rng(*parts: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive(*parts)))
