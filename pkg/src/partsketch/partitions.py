"""Partitions of {0..n-1} and the pairing strategies that build them.

A partition is an ordered tuple of disjoint, nonempty, ordered index groups
covering the whole ground set.  Pairing strategies order the indices by some
rule and chunk the order into consecutive pairs; for odd n the final group is
a singleton holding the leftover index.

JSON serialization uses 1-based indices; everything in memory is 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .rng import generator

PAIRING_KINDS = ("enhanced", "random", "balanced", "simple")


@dataclass(frozen=True)
class Partition:
    """Ordered groups of 0-based indices partitioning {0..n-1}."""

    n: int
    groups: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.groups)


@dataclass(frozen=True)
class PairingStrategy:
    """One of "enhanced", "random", "balanced", "simple"; random carries its seed."""

    kind: str
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in PAIRING_KINDS:
            raise ValueError(f"unknown pairing kind {self.kind!r}, expected one of {PAIRING_KINDS}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random pairing requires a seed")
        if self.kind != "random" and self.seed is not None:
            raise ValueError(f"{self.kind} pairing takes no seed")


ENHANCED = PairingStrategy("enhanced")
BALANCED = PairingStrategy("balanced")
SIMPLE = PairingStrategy("simple")


def random_pairing(seed: int) -> PairingStrategy:
    return PairingStrategy("random", seed)


def validate(partition: Partition) -> str | None:
    """Return None if the partition invariants hold, else the first violation."""
    n = partition.n
    if n < 1:
        return f"ground-set size must be positive, got {n}"
    if not 1 <= len(partition.groups) <= n:
        return f"group count must be in [1, {n}], got {len(partition.groups)}"
    seen = np.zeros(n, dtype=bool)
    for gi, group in enumerate(partition.groups):
        if len(group) == 0:
            return f"group {gi} is empty"
        for idx in group:
            if not isinstance(idx, (int, np.integer)):
                return f"group {gi} holds a non-integer index {idx!r}"
            if not 0 <= idx < n:
                return f"index {idx} out of range [0, {n})"
            if seen[idx]:
                return f"index {idx} appears in more than one group"
            seen[idx] = True
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        return f"index {missing} is not covered by any group"
    return None


def finest(n: int) -> Partition:
    """The n singleton groups {0},{1},...,{n-1} in index order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return Partition(n, tuple((i,) for i in range(n)))


def coarsen(groups, n: int) -> Partition:
    """Validated partition from user-supplied groups; raises on any invariant violation."""
    partition = Partition(int(n), tuple(tuple(int(i) for i in g) for g in groups))
    violation = validate(partition)
    if violation is not None:
        raise ValueError(violation)
    return partition


def _pair_order(weights: np.ndarray, strategy: PairingStrategy) -> np.ndarray:
    n = weights.size
    ascending = np.argsort(weights, kind="stable")
    if strategy.kind == "enhanced":
        return ascending
    if strategy.kind == "simple":
        return np.arange(n)
    if strategy.kind == "random":
        return generator(strategy.seed).permutation(n)
    # balanced: largest with smallest, second largest with second smallest, ...
    order = np.empty(n, dtype=np.intp)
    for j in range(n // 2):
        order[2 * j] = ascending[n - 1 - j]
        order[2 * j + 1] = ascending[j]
    if n % 2:
        order[n - 1] = ascending[n // 2]
    return order


def pair_partition(weights, strategy: PairingStrategy) -> Partition:
    """Pair indices by the strategy's ordering of the per-index probabilities.

    ``weights`` are the finest-partition sampling probabilities that the
    enhanced/balanced orderings sort on (ties broken by ascending index).
    Consecutive entries of the resulting order form the pairs; for odd n the
    trailing index becomes a singleton group.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("need a 1-d probability vector over at least 2 indices")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("probabilities must be finite and nonnegative")
    order = _pair_order(w, strategy)
    groups = [(int(order[2 * j]), int(order[2 * j + 1])) for j in range(w.size // 2)]
    if w.size % 2:
        groups.append((int(order[-1]),))
    return Partition(w.size, tuple(groups))


def partition_to_json(partition: Partition) -> str:
    """JSON array of arrays of 1-based indices."""
    return json.dumps([[i + 1 for i in g] for g in partition.groups])


def partition_from_json(text: str) -> Partition:
    groups = json.loads(text)
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
        raise ValueError("partition JSON must be an array of arrays")
    zero_based = [[int(i) - 1 for i in g] for g in groups]
    n = sum(len(g) for g in zero_based)
    return coarsen(zero_based, n)
