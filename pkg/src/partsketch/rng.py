"""Deterministic seed derivation and counter-based uniform streams.

All randomness in this package flows through Philox, a counter-based
generator: the i-th variate of a keyed stream is a pure function of
(key, i), so batching, splitting, or reordering evaluation never changes
the values drawn.  Substream keys are derived from a master seed and a
label path through ``derive_seed``.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _entropy_word(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & _MASK64
    digest = hashlib.blake2b(str(part).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(master_seed: int, *path) -> int:
    """64-bit key of the substream identified by ``path`` under ``master_seed``.

    Path elements may be ints or strings; strings are hashed with blake2b
    so labels like "fig1" address stable, independent substreams.
    """
    words = [_entropy_word(master_seed)] + [_entropy_word(p) for p in path]
    return int(np.random.SeedSequence(words).generate_state(1, np.uint64)[0])


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """``count`` float64 uniforms on [0, 1) from the Philox stream keyed by ``seed``."""
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed & _MASK64)))
    return gen.random(count)


def generator(seed: int) -> np.random.Generator:
    """A Philox generator keyed by ``seed`` for bulk draws (matrix entries, permutations)."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed & _MASK64)))
