"""Seeded random generators.

All randomness goes through numpy's PCG64 so certificates replay identically on
every platform. Child seeds are derived with SeedSequence, never by adding
offsets to a shared stream.
"""

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & SEED_MASK))


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed for (seed, *keys)."""
    entropy = [seed & SEED_MASK, *(k & SEED_MASK for k in keys)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])
