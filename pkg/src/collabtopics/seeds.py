"""Stable seed derivation for all randomized steps.

Every RNG in the pipeline is seeded from one global seed plus a
string path (author id, step name, replicate index). Derivation uses
sha256, never Python's salted hash(), so runs reproduce across
processes and interpreter restarts.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts: object) -> int:
    """Map (global_seed, "step", author_id, ...) to a 64-bit seed."""
    key = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(*parts: object) -> random.Random:
    """A private random.Random seeded via derive_seed."""
    return random.Random(derive_seed(*parts))
