"""Deterministic named random streams.

Every stochastic component draws from a counter-based 64-bit generator
(Philox) keyed by hashing a master seed together with a purpose label, so
independent streams ("alice-bits", "bob-bases", ...) can be replayed
bit-exactly and never interfere with each other regardless of draw order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(master_seed: int, *labels: str) -> np.random.Generator:
    """Generator for the stream named by ``labels`` under ``master_seed``."""
    tag = ":".join(str(part) for part in labels)
    digest = hashlib.sha256(f"{master_seed}|{tag}".encode()).digest()
    key = np.frombuffer(digest[:16], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
