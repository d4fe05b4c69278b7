"""Sampling distributions over partition groups.

The weight of a group is the Frobenius norm of its block product; sampling
proportionally to these weights minimizes the expected squared Frobenius
error of the sketch.  Aggregated distributions sum finest-partition
probabilities over each group's members.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ZeroProductError
from .matrices import block_product, frobenius_norm
from .partitions import Partition, finest, validate

SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SamplingDistribution:
    """Probabilities over the groups of ``support``, summing to 1.

    Groups may carry probability 0 (they are never sampled); any group whose
    block product is nonzero must keep strictly positive probability for the
    sketch to stay unbiased.
    """

    support: Partition
    weights: np.ndarray

    def __post_init__(self):
        self.weights.flags.writeable = False


def distribution(support: Partition, weights, *, normalize: bool = False) -> SamplingDistribution:
    """Validated distribution over ``support``; with ``normalize`` the weights are rescaled to sum to 1."""
    violation = validate(support)
    if violation is not None:
        raise ValueError(violation)
    w = np.array(weights, dtype=np.float64, copy=True)
    if w.shape != (support.k,):
        raise ValueError(f"expected {support.k} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and nonnegative")
    total = float(np.sum(w))
    if normalize:
        if total <= 0:
            raise ValueError("cannot normalize weights summing to zero")
        w /= total
    elif abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"weights sum to {total}, expected 1 within {SUM_TOL}")
    return SamplingDistribution(support, w)


def element_weight(a: np.ndarray, b: np.ndarray, group) -> float:
    """Frobenius norm of the group's block product."""
    return frobenius_norm(block_product(a, b, group))


def optimal_distribution(a: np.ndarray, b: np.ndarray, partition: Partition) -> SamplingDistribution:
    """Group probabilities proportional to the block-product Frobenius norms.

    Groups whose block product is exactly zero get probability 0: they
    contribute nothing to the product, so never sampling them keeps the
    estimator unbiased and the error formula finite.  Raises
    :class:`ZeroProductError` when every weight vanishes (the product is zero
    and no distribution is defined).
    """
    if a.shape[1] != partition.n:
        raise ValueError(f"partition covers {partition.n} indices but a has {a.shape[1]} columns")
    w = np.array([element_weight(a, b, g) for g in partition.groups])
    total = float(np.sum(w))
    if total == 0.0:
        raise ZeroProductError("every block weight is zero: the product is the zero matrix")
    return SamplingDistribution(partition, w / total)


def uniform_distribution(partition: Partition) -> SamplingDistribution:
    """Probability 1/k for each of the k groups."""
    k = partition.k
    return SamplingDistribution(partition, np.full(k, 1.0 / k))


def aggregate_distribution(p_finest: SamplingDistribution, partition: Partition) -> SamplingDistribution:
    """Sum the finest-partition probabilities of each group's members.

    ``p_finest`` must be supported on the finest partition of the same ground
    set as ``partition``.
    """
    n = partition.n
    if p_finest.support != finest(n):
        raise ValueError("p_finest must be supported on the finest partition of the same ground set")
    violation = validate(partition)
    if violation is not None:
        raise ValueError(violation)
    w = np.array([float(np.sum(p_finest.weights[list(g)])) for g in partition.groups])
    return SamplingDistribution(partition, w)


def distribution_stats(dist: SamplingDistribution) -> dict[str, float]:
    """max/mean/min of the probabilities, the summary used by the experiment tables."""
    w = dist.weights
    return {"max": float(w.max()), "mean": float(w.mean()), "min": float(w.min())}


def distribution_to_json(dist: SamplingDistribution) -> str:
    """JSON object {"partition": 1-based groups, "weights": [...]}."""
    payload = {
        "partition": [[i + 1 for i in g] for g in dist.support.groups],
        "weights": [float(v) for v in dist.weights],
    }
    return json.dumps(payload, sort_keys=True)
