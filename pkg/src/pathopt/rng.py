"""Seed handling.

Every random choice in the package flows from a single integer seed through
numpy's PCG64 generator. Sub-streams (restarts, ensemble members, trial runs)
get their own seeds via ``derive_seed`` so that adding a restart never
perturbs the stream of an earlier one.
"""

from __future__ import annotations

import secrets

import numpy as np


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic child seed for the stream identified by ``keys``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def fresh_seed() -> int:
    return secrets.randbits(63)
