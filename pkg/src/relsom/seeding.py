"""Deterministic seed derivation.

Every stochastic component takes an explicit seed. Sub-seeds are derived by
stable hashing of string coordinates so that independent work units (child
SOM training, protocol cells, bootstrap members) get reproducible streams
regardless of execution order or process boundaries.
"""

import hashlib

import numpy as np

_MASK = (1 << 63) - 1


def derive_seed(master: int, *parts) -> int:
    """Derive a sub-seed from a master seed and a path of coordinates."""
    text = str(int(master)) + "/" + "/".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK


def rng_for(master: int, *parts) -> np.random.Generator:
    """RNG seeded from a derived sub-seed."""
    return np.random.default_rng(derive_seed(master, *parts))
