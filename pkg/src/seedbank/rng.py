"""Reproducible per-replicate random streams."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngSpec:
    """Key of one independent random stream.

    Identical ``(base_seed, replicate_index)`` pairs give identical streams,
    so replicates can run in any order or on any worker.
    """

    base_seed: int = 0
    replicate_index: int = 0

    def __post_init__(self):
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must be a 64-bit unsigned integer")
        if self.replicate_index < 0:
            raise ValueError("replicate_index must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=self.base_seed, spawn_key=(self.replicate_index,))
        return np.random.Generator(np.random.PCG64(seq))

    def replicate(self, index: int) -> "RngSpec":
        return RngSpec(self.base_seed, index)


def as_generator(rng) -> np.random.Generator:
    """Accept an ``RngSpec``, a ``Generator`` or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    return np.random.default_rng(rng)


class Draws:
    """Buffered standard exponentials and uniforms from one generator.

    Per-call overhead of ``Generator`` methods dominates event-driven loops,
    so draws are taken in blocks.
    """

    def __init__(self, gen: np.random.Generator, block: int = 256):
        self.gen = gen
        self.block = block
        self._exp = []
        self._uni = []

    def exponential(self) -> float:
        if not self._exp:
            self._exp = self.gen.standard_exponential(self.block).tolist()
        return self._exp.pop()

    def uniform(self) -> float:
        if not self._uni:
            self._uni = self.gen.random(self.block).tolist()
        return self._uni.pop()
