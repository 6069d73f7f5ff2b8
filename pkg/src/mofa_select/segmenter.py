"""Coarse temporal clustering into contiguous segments.

Minimizes the cumulative cosine distance of frames to their segment
centroids (see :func:`mofa_select.geometry.cluster_objective`). Small
inputs are solved exactly by dynamic programming over segment costs;
larger inputs fall back to boundary coordinate descent from an
equal-size initialization.

The segment cost uses the identity

    sum_{t in [i,j)} (1 - sim(f_t, c)) == (j - i) - ||sum_{t} g_t||

where g_t are the L2-normalized frames and c their mean: sim(f_t, c)
equals g_t . S / ||S|| with S = sum g_t, so the member similarities sum
to ||S||. Costs are clamped at zero to absorb rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import FeatureSequence, Partition, unit_rows


@dataclass(frozen=True)
class SegmenterConfig:
    num_clusters: int = 6
    max_iters: int = 100
    exact_threshold: int = 512

    def __post_init__(self):
        if self.num_clusters < 1:
            raise ValueError("num_clusters must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.exact_threshold < 0:
            raise ValueError("exact_threshold must be >= 0")


def init_partition(n: int, u: int) -> Partition:
    """Deterministic near-equal contiguous split; longer segments first."""
    if u < 1:
        raise ValueError("cluster count must be >= 1")
    if u > n:
        raise ValueError(f"cluster count {u} exceeds frame count {n}")
    base, rem = divmod(n, u)
    bounds = [0]
    for k in range(u):
        bounds.append(bounds[-1] + base + (1 if k < rem else 0))
    return Partition(tuple(bounds))


def _prefix_units(seq: FeatureSequence) -> np.ndarray:
    units = unit_rows(seq.features)
    prefix = np.zeros((len(seq) + 1, seq.dim), dtype=np.float64)
    np.cumsum(units, axis=0, out=prefix[1:])
    return prefix


def _cost_table(prefix: np.ndarray) -> np.ndarray:
    """All segment costs cost[i, j] for 0 <= i < j <= n."""
    n = prefix.shape[0] - 1
    lengths = np.arange(n + 1, dtype=np.float64)
    if n <= 64:
        cost = np.zeros((n + 1, n + 1), dtype=np.float64)
        for i in range(n):
            diffs = prefix[i + 1 :] - prefix[i]
            norms = np.linalg.norm(diffs, axis=1)
            cost[i, i + 1 :] = np.maximum(0.0, lengths[1 : n + 1 - i] - norms)
        return cost
    # Gram-matrix form: ||P_j - P_i||^2 = q_j - 2 G_ij + q_i. One BLAS
    # call instead of n row sweeps; the clamp absorbs cancellation.
    q = np.einsum("ij,ij->i", prefix, prefix)
    gram = prefix @ prefix.T
    sq = np.maximum(0.0, q[None, :] - 2.0 * gram + q[:, None])
    dist = np.sqrt(sq)
    span = lengths[None, :] - lengths[:, None]
    cost = np.maximum(0.0, span - dist)
    return np.triu(cost, k=1)


def dp_optimal_partition(seq: FeatureSequence, u: int) -> Partition:
    """Exact minimizer of the clustering objective over contiguous splits.

    O(n^2) segment-cost precomputation plus an O(u * n^2) table sweep;
    ties resolve to the lexicographically smallest boundary list.
    """
    n = len(seq)
    if u < 1:
        raise ValueError("cluster count must be >= 1")
    if u > n:
        raise ValueError(f"cluster count {u} exceeds frame count {n}")
    if u == 1:
        return Partition((0, n))
    if u == n:
        return Partition(tuple(range(n + 1)))

    prefix = _prefix_units(seq)
    cost = _cost_table(prefix)

    # suffix[k][i]: best cost of splitting frames [i, n) into k segments.
    suffix = np.full((u + 1, n + 1), np.inf, dtype=np.float64)
    suffix[1, : n + 1] = cost[:, n]
    for k in range(2, u + 1):
        # first segment [i, j) must leave >= k-1 frames behind it
        for i in range(n - k, -1, -1):
            j_lo, j_hi = i + 1, n - k + 2
            vals = cost[i, j_lo:j_hi] + suffix[k - 1, j_lo:j_hi]
            suffix[k, i] = vals.min()

    bounds = [0]
    i = 0
    for k in range(u, 1, -1):
        j_lo, j_hi = i + 1, n - k + 2
        vals = cost[i, j_lo:j_hi] + suffix[k - 1, j_lo:j_hi]
        i = j_lo + int(np.argmin(vals))  # first argmin -> smallest boundary
        bounds.append(i)
    bounds.append(n)
    return Partition(tuple(bounds))


def _range_costs(prefix, sq_norms, lo, hi):
    """Costs of [lo, p) and [p, hi) for every p in (lo, hi)."""
    idx = np.arange(lo + 1, hi)
    block = prefix[lo + 1 : hi]
    left_sq = np.maximum(0.0, sq_norms[lo + 1 : hi] - 2.0 * (block @ prefix[lo]) + sq_norms[lo])
    right_sq = np.maximum(0.0, sq_norms[hi] - 2.0 * (block @ prefix[hi]) + sq_norms[lo + 1 : hi])
    left = np.maximum(0.0, (idx - lo) - np.sqrt(left_sq))
    right = np.maximum(0.0, (hi - idx) - np.sqrt(right_sq))
    return left + right


def _descend(seq: FeatureSequence, u: int, max_iters: int) -> Partition:
    n = len(seq)
    bounds = list(init_partition(n, u).boundaries)
    if u == 1 or u == n:
        return Partition(tuple(bounds))
    prefix = _prefix_units(seq)
    sq_norms = np.einsum("ij,ij->i", prefix, prefix)
    for _ in range(max_iters):
        changed = False
        for k in range(1, u):
            lo, hi = bounds[k - 1], bounds[k + 1]
            if hi - lo < 2:
                continue
            costs = _range_costs(prefix, sq_norms, lo, hi)
            best = lo + 1 + int(np.argmin(costs))  # ties -> smaller index
            if best != bounds[k]:
                bounds[k] = best
                changed = True
        if not changed:
            break
    return Partition(tuple(bounds))


def segment(seq: FeatureSequence, cfg: SegmenterConfig) -> Partition:
    """Partition the sequence into ``cfg.num_clusters`` contiguous segments.

    Exact (DP) when the sequence fits under ``cfg.exact_threshold``,
    otherwise coordinate descent on the boundaries. Deterministic.
    """
    u = cfg.num_clusters
    if u > len(seq):
        raise ValueError(f"cluster count {u} exceeds frame count {len(seq)}")
    if len(seq) <= cfg.exact_threshold:
        return dp_optimal_partition(seq, u)
    return _descend(seq, u, cfg.max_iters)
