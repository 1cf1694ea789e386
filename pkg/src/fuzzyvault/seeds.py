"""Deterministic RNG plumbing: master seeds and labeled substreams.

Every randomized operation in this package takes a seed (or an already
constructed ``random.Random``) and derives the streams it needs through
:func:`substream`, so that unrelated stages of a computation never share
state.  ``random.Random(str)`` hashes the string through SHA-512, which is
stable across processes and platforms.
"""

from __future__ import annotations

import random


def as_rng(seed: int | random.Random | None) -> random.Random:
    """Accept an int seed, an existing generator, or None (fresh entropy)."""
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def substream(seed: int, label: str) -> random.Random:
    """Independent deterministic stream derived from (seed, label)."""
    return random.Random(f"{seed}/{label}")
