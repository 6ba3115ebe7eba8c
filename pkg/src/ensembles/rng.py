"""Reproducible random streams.

Every stream is a Philox-4x64 counter-based generator (numpy's
``np.random.Philox``) keyed by ``SeedSequence(seed, spawn_key=(tag, chunk))``,
where ``tag`` is a fixed integer per module below. The same
``(seed, tag, chunk)`` always yields the same stream, independent of how many
other streams were created before it.
"""

from __future__ import annotations

import numpy as np

MODULE_TAGS = {
    "combinat": 1,
    "ewens": 2,
    "pdirichlet": 3,
    "plancherel": 4,
    "kernels": 5,
    "measures": 6,
    "cli": 7,
}


def stream(seed: int, module: str = "cli", chunk: int = 0) -> np.random.Generator:
    tag = MODULE_TAGS[module]
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(tag, int(chunk)))
    return np.random.Generator(np.random.Philox(seq))


def chunk_plan(count: int, chunk_size: int) -> list[tuple[int, int]]:
    """Split ``count`` items into ``(chunk_index, size)`` pieces of at most ``chunk_size``."""
    plan = []
    start = 0
    index = 0
    while start < count:
        size = min(chunk_size, count - start)
        plan.append((index, size))
        start += size
        index += 1
    return plan


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an integer seed or ``None``."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.default_rng()
    return stream(int(rng))
