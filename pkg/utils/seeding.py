"""
Deterministic seed derivation.

Every stochastic step derives its own generator from the global seed and
the identifiers of the unit of work (dataset, bin, sample, view, epoch),
so results never depend on how work is split across workers.
"""

import hashlib
from typing import Union

import numpy as np

SeedPart = Union[int, str]


def derive_seed(*parts: SeedPart) -> int:
    """Mix identifiers into a 64-bit seed."""
    digest = hashlib.blake2b(digest_size=8)
    for part in parts:
        tag = b"i" if isinstance(part, int) else b"s"
        digest.update(tag + str(part).encode("utf-8") + b"\x1f")
    return int.from_bytes(digest.digest(), "little")


def rng_for(*parts: SeedPart) -> np.random.Generator:
    """Return a numpy generator seeded from ``derive_seed(*parts)``."""
    return np.random.default_rng(derive_seed(*parts))


def as_generator(seed: Union[int, np.random.Generator, None]) -> np.random.Generator:
    """Accept either a seed or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
