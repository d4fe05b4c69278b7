"""Shared generators for randomized test instances."""

import numpy as np

from partsketch import coarsen, dense


def random_instance(rng, max_rows=5, n=None, max_n=8, max_cols=5, centered=True):
    """Random (a, b) with conforming inner dimension."""
    m = int(rng.integers(1, max_rows + 1))
    if n is None:
        n = int(rng.integers(2, max_n + 1))
    p = int(rng.integers(1, max_cols + 1))
    shift = 0.5 if centered else 0.0
    a = dense(rng.random((m, n)) - shift)
    b = dense(rng.random((n, p)) - shift)
    return a, b


def random_coarsening(rng, n, max_groups=None):
    """Random partition of {0..n-1} with at least one group of size >= 2 when n >= 2."""
    perm = list(rng.permutation(n))
    k = int(rng.integers(1, (max_groups or max(n - 1, 1)) + 1))
    k = min(k, n - 1) if n >= 2 else 1
    cuts = sorted(rng.choice(np.arange(1, n), size=k - 1, replace=False)) if k > 1 else []
    groups = []
    start = 0
    for cut in list(cuts) + [n]:
        groups.append([int(i) for i in perm[start:cut]])
        start = cut
    return coarsen(groups, n)


def all_pairings(indices):
    """Every perfect matching of an even-length index list (plus trailing singleton if odd)."""
    items = list(indices)
    if len(items) <= 1:
        yield [tuple(items)] if items else []
        return
    first, rest = items[0], items[1:]
    for i in range(len(rest)):
        pair = (first, rest[i])
        for sub in all_pairings(rest[:i] + rest[i + 1:]):
            yield [pair] + sub
