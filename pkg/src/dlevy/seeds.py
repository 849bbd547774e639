"""Deterministic seed derivation.

A :class:`SeedSpec` names a (master seed, stream id) pair.  Generators are
derived through :class:`numpy.random.SeedSequence` with the spawn key
``(stream, *path)``, where ``path`` is a tuple of small integers naming the
consumer (e.g. ``(PRM, annulus_index, COMPONENT)``).  PCG64 output for a given
seed sequence is identical on every platform, so the same spec reproduces
the same draws across runs, processes and thread schedules.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# sub-stream tags; stable integer codes, never renumber
PRM = 1
SPECTRAL = 2
LEPAGE_SIGNS = 3
LEPAGE_EXP = 4
LEPAGE_BASE = 5
DOUBLE_SUM = 6
PANEL = 7
ORACLE = 8
LAW = 9
PREPASS = 10


@dataclass(frozen=True)
class SeedSpec:
    master: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= int(self.master) < 2**64):
            raise ValueError("master seed must be a 64-bit unsigned integer")
        if int(self.stream) < 0:
            raise ValueError("stream id must be non-negative")

    def sequence(self, *path: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(self.master),
                                      spawn_key=(int(self.stream),) + tuple(int(p) for p in path))

    def generator(self, *path: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.sequence(*path)))

    def child(self, stream: int) -> "SeedSpec":
        """Same master seed, another stream id (used for replicate ``stream``)."""
        return SeedSpec(self.master, stream)

    def replicate(self, index: int) -> "SeedSpec":
        # disjoint from any user-chosen small stream ids
        return SeedSpec(self.master, (int(self.stream) << 32) + 1 + int(index))


def as_seed(seed) -> SeedSpec:
    if isinstance(seed, SeedSpec):
        return seed
    return SeedSpec(int(seed), 0)
