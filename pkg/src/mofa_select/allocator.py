"""Motion-aware integer frame budgets per cluster.

Each cluster's spread (relative to the most dynamic cluster) boosts its
proportional share of the target length; the boosted budgets are then
rescaled with largest-remainder apportionment so they sum to the target
exactly while every cluster keeps between 1 and its size.

All apportionment arithmetic is exact integer math, so rescaling is
invariant to scaling all raw budgets by a common factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import ClusterStats, FeatureSequence, Partition, set_variance, unit_rows


@dataclass(frozen=True)
class Allocation:
    """Budgets per cluster: size-proportional, motion-boosted, rescaled."""

    r_origin: list[int]
    r_raw: list[int]
    r_final: list[int]


def cluster_variances(seq: FeatureSequence, p: Partition) -> list[float]:
    p.check_covers(len(seq))
    return [
        set_variance(seq.features[lo:hi])
        for lo, hi in zip(p.boundaries, p.boundaries[1:])
    ]


def cluster_stats(seq: FeatureSequence, p: Partition) -> list[ClusterStats]:
    """Centroid, variance and normalized motion score for each cluster."""
    variances = cluster_variances(seq, p)
    scores = _normalize_scores(variances)
    units = unit_rows(seq.features)
    out = []
    for k, (lo, hi) in enumerate(zip(p.boundaries, p.boundaries[1:])):
        centroid = units[lo:hi].mean(axis=0)
        out.append(ClusterStats(centroid=centroid, variance=variances[k], motion_score=scores[k]))
    return out


def _normalize_scores(variances: list[float]) -> list[float]:
    top = max(variances)
    if top <= 0.0:
        return [0.0] * len(variances)
    return [v / top for v in variances]


def motion_scores(seq: FeatureSequence, p: Partition) -> list[float]:
    """Per-cluster variance divided by the maximum cluster variance.

    All-zero when every cluster is internally colinear; otherwise the
    most dynamic cluster scores exactly 1.
    """
    return _normalize_scores(cluster_variances(seq, p))


def raw_budgets(sizes: list[int], scores: list[float], n_p: int) -> list[int]:
    """Motion-boosted budgets, clamped to [1, cluster size].

    Each cluster starts from its proportional share floor(n_p * size / N)
    and is boosted by a factor (1 + score) before flooring and clamping.
    """
    n_o = sum(sizes)
    u = len(sizes)
    if len(scores) != u:
        raise ValueError("sizes and scores disagree on cluster count")
    if any(s < 1 for s in sizes):
        raise ValueError("cluster sizes must be >= 1")
    if any(not 0.0 <= s <= 1.0 for s in scores):
        raise ValueError("scores must lie in [0, 1]")
    if n_p < u:
        raise ValueError(f"target {n_p} below cluster count {u}: clamp the cluster count first")
    if n_p > n_o:
        raise ValueError(f"target {n_p} exceeds frame count {n_o}")
    out = []
    for size, score in zip(sizes, scores):
        origin = n_p * size // n_o
        boosted = math.floor(origin * (1.0 + score))
        out.append(max(1, min(boosted, size)))
    return out


def scale_budgets(r_raw: list[int], sizes: list[int], n_p: int) -> list[int]:
    """Rescale raw budgets to sum to ``n_p`` within [1, size] per cluster.

    Largest-remainder apportionment of n_p proportionally to r_raw, then
    clamping, then one-unit redistribution among clusters still inside
    their bounds (largest remainder first when adding, smallest first
    when removing; ties to the lower index). Returns r_raw unchanged when
    it already sums to n_p.
    """
    u = len(r_raw)
    if len(sizes) != u:
        raise ValueError("budgets and sizes disagree on cluster count")
    if not u <= n_p <= sum(sizes):
        raise ValueError(f"target {n_p} infeasible for {u} clusters of total size {sum(sizes)}")
    # r_raw acts as a vector of proportions: only positivity is required,
    # which keeps rescaling invariant under r_raw -> c * r_raw.
    if any(r < 1 for r in r_raw):
        raise ValueError("raw budgets must be >= 1")
    total = sum(r_raw)
    if total == n_p and all(r <= s for r, s in zip(r_raw, sizes)):
        return list(r_raw)

    # Exact quotas n_p * r_k / total: floor plus integer remainder.
    base = [n_p * r // total for r in r_raw]
    remainder = [n_p * r - b * total for r, b in zip(r_raw, base)]
    leftover = n_p - sum(base)
    for k in sorted(range(u), key=lambda k: (-remainder[k], k))[:leftover]:
        base[k] += 1

    scaled = [max(1, min(b, size)) for b, size in zip(base, sizes)]
    gap = n_p - sum(scaled)
    while gap > 0:
        open_up = [k for k in range(u) if scaled[k] < sizes[k]]
        k = max(open_up, key=lambda k: (remainder[k], -k))
        scaled[k] += 1
        gap -= 1
    while gap < 0:
        open_down = [k for k in range(u) if scaled[k] > 1]
        k = min(open_down, key=lambda k: (remainder[k], k))
        scaled[k] -= 1
        gap += 1
    return scaled


def allocate(seq: FeatureSequence, p: Partition, n_p: int) -> tuple[Allocation, list[float], list[float]]:
    """Run the scoring + budgeting chain for a partition.

    Returns the allocation plus the cluster variances and motion scores
    that produced it (kept for reporting).
    """
    sizes = p.sizes()
    n_o = len(seq)
    variances = cluster_variances(seq, p)
    scores = _normalize_scores(variances)
    r_origin = [n_p * size // n_o for size in sizes]
    r_raw = raw_budgets(sizes, scores, n_p)
    r_final = scale_budgets(r_raw, sizes, n_p)
    return Allocation(r_origin, r_raw, r_final), variances, scores
