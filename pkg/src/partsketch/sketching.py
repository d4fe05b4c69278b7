"""The randomized sketch engine.

A sketch draws c group indices from a sampling distribution over a partition
of the inner dimension and averages the correspondingly rescaled block
products.  Draws come from a counter-based stream, so a (matrices, partition,
distribution, config) tuple fully determines the result bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .distributions import SamplingDistribution, aggregate_distribution, optimal_distribution
from .matrices import _block, _frozen
from .partitions import PairingStrategy, Partition, finest, pair_partition
from .rng import uniform_stream


@dataclass(frozen=True)
class SketchConfig:
    """Sample count and master seed of one sketch."""

    c: int
    seed: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"sample count must be >= 1, got {self.c}")


@dataclass(frozen=True, eq=False)
class SketchResult:
    """Estimate plus the draw log that produced it."""

    estimate: np.ndarray
    draws: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.estimate.flags.writeable = False
        self.draws.flags.writeable = False
        self.counts.flags.writeable = False


def sample_indices(dist: SamplingDistribution, c: int, seed: int) -> np.ndarray:
    """c categorical draws from ``dist`` by inverse-CDF binary search.

    Draw i consumes the i-th variate of the Philox stream keyed by ``seed``,
    so the draw list does not depend on evaluation order or batching.
    Zero-probability groups occupy empty CDF intervals and are never drawn.
    """
    if c < 1:
        raise ValueError(f"sample count must be >= 1, got {c}")
    cdf = np.cumsum(dist.weights)
    cdf /= cdf[-1]
    u = uniform_stream(seed, c)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _scaled_blocks(a, b, partition, weights, counts, c):
    """Yield (group index, count/(c*p) * block) for drawn groups in ascending group order."""
    for g in np.flatnonzero(counts):
        scale = counts[g] / (c * weights[g])
        yield g, scale * _block(a, b, np.asarray(partition.groups[g], dtype=np.intp))


def sketch(a: np.ndarray, b: np.ndarray, partition: Partition,
           dist: SamplingDistribution, cfg: SketchConfig) -> SketchResult:
    """Estimate ``a @ b`` from c rescaled block products drawn under ``dist``.

    The estimate accumulates each drawn group's scaled block once, in
    ascending group order (the draw multiset, not the draw order, determines
    the sum).  Every drawn group has positive probability by construction of
    the sampler.
    """
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    if partition.n != a.shape[1]:
        raise ValueError(f"partition covers {partition.n} indices but the inner dimension is {a.shape[1]}")
    if dist.support != partition:
        raise ValueError("distribution is not supported on the given partition")
    draws = sample_indices(dist, cfg.c, cfg.seed)
    counts = np.bincount(draws, minlength=partition.k).astype(np.int64)
    estimate = np.zeros((a.shape[0], b.shape[1]))
    for _, scaled in _scaled_blocks(a, b, partition, dist.weights, counts, cfg.c):
        estimate += scaled
    return SketchResult(_frozen(estimate), draws, counts)


def element_contribution(a: np.ndarray, b: np.ndarray, partition: Partition,
                         dist: SamplingDistribution, draws: np.ndarray, group_index: int) -> np.ndarray:
    """The part of the estimate attributable to one group, from the same draw log.

    Summing over all group indices in ascending order reproduces the sketch
    estimate exactly (identical summation order, identical scaled blocks).
    """
    if not 0 <= group_index < partition.k:
        raise ValueError(f"group index {group_index} out of range [0, {partition.k})")
    c = len(draws)
    count = int(np.sum(draws == group_index))
    if count == 0:
        return _frozen(np.zeros((a.shape[0], b.shape[1])))
    scale = count / (c * dist.weights[group_index])
    idx = np.asarray(partition.groups[group_index], dtype=np.intp)
    return _frozen(scale * _block(a, b, idx))


def pairwise_plan(a: np.ndarray, b: np.ndarray,
                  strategy: PairingStrategy) -> tuple[Partition, SamplingDistribution]:
    """The pair partition and aggregated distribution a pairwise sketch samples from.

    Builds the per-index optimal probabilities, orders and pairs them by the
    strategy, and assigns each pair the sum of its members' probabilities.
    """
    p_finest = optimal_distribution(a, b, finest(a.shape[1]))
    partition = pair_partition(p_finest.weights, strategy)
    return partition, aggregate_distribution(p_finest, partition)


def sketch_pairwise(a: np.ndarray, b: np.ndarray, strategy: PairingStrategy,
                    cfg: SketchConfig) -> SketchResult:
    """Pairwise-partition sketch: pair indices, aggregate probabilities, sample pairs.

    The draw log records pair indices into the strategy's pair partition.
    """
    if a.shape[1] < 2:
        raise ValueError("pairwise sketching needs at least 2 inner indices")
    partition, dist = pairwise_plan(a, b, strategy)
    return sketch(a, b, partition, dist, cfg)


def draw_log_json(result: SketchResult, cfg: SketchConfig) -> str:
    """JSON draw log {"draws": 1-based group indices, "counts", "seed", "c"}."""
    payload = {
        "draws": [int(r) + 1 for r in result.draws],
        "counts": [int(v) for v in result.counts],
        "seed": int(cfg.seed),
        "c": int(cfg.c),
    }
    return json.dumps(payload, sort_keys=True)
