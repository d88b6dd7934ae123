"""Per-replication random streams derived from a master seed.

Each replication owns an independent ``numpy.random.Generator`` whose seed is
a pure function of ``(master_seed, replication_index)``. The derivation uses
the splitmix64 finalizer so that neighbouring indices land on unrelated seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """Return the splitmix64 finalizer of ``x`` (64-bit wraparound)."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, replication_index: int) -> int:
    """Mix a master seed and a replication index into one 64-bit seed.

    ``splitmix64(splitmix64(master) ^ (index * GOLDEN_GAMMA mod 2**64))``.
    """
    if replication_index < 0:
        raise ValueError("replication_index must be non-negative")
    base = splitmix64(master_seed & MASK64)
    return splitmix64(base ^ ((replication_index * GOLDEN_GAMMA) & MASK64))


@dataclass(frozen=True)
class SeedStream:
    master_seed: int
    replication_index: int = 0

    def __post_init__(self):
        if self.replication_index < 0:
            raise ValueError("replication_index must be non-negative")

    @property
    def seed(self) -> int:
        return derive_seed(self.master_seed, self.replication_index)

    def generator(self) -> np.random.Generator:
        """Fresh generator; calling twice gives two identical streams."""
        return np.random.Generator(np.random.PCG64(self.seed))

    def replication(self, index: int) -> "SeedStream":
        return SeedStream(self.master_seed, index)
