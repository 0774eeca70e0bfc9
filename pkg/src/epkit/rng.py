"""Seeded, splittable random streams.

A replication is identified by ``(seed, stream)``; each pair maps to an
independent PCG64 generator through numpy's SeedSequence spawn keys, so
Monte Carlo work can be farmed out without sharing generator state.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSeed:
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v <= _MASK64:
                raise DomainError(f"{name} must be an unsigned 64-bit integer")

    def generator(self, replication=None):
        """Generator for this stream, or for one replication within it."""
        key = (self.stream,) if replication is None else (self.stream, int(replication))
        ss = np.random.SeedSequence(self.seed, spawn_key=key)
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng=None):
    """Accept a Generator, an RngSeed, an integer seed, or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSeed):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    raise TypeError(f"cannot build a generator from {type(rng).__name__}")
