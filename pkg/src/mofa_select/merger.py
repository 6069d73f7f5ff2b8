"""Fine-grained within-cluster reduction.

Repeatedly selects the most similar adjacent frame pair. A pair whose
motion penalty (pairwise variance, i.e. (1 - cos)/2) stays at or below
the threshold is averaged into one frame; a pair above it loses one
frame instead, keeping the less redundant of the two. Each step removes
exactly one frame, so a cluster reaches its budget in len - budget steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import NORM_EPS, FeatureFrame, set_variance

MERGED = "merged"
DISCARDED = "discarded"

# Tolerance for treating two neighbor similarities as tied in the
# discard rule.
TIE_EPS = 1e-9


@dataclass(frozen=True)
class MergeConfig:
    delta: float = 0.3

    def __post_init__(self):
        if not self.delta >= 0.0:
            raise ValueError("delta must be >= 0")


@dataclass(frozen=True)
class MergeEvent:
    kind: str
    pair_index: int
    penalty: float


@dataclass
class MergeTrace:
    events: list[MergeEvent] = field(default_factory=list)

    @property
    def merge_count(self) -> int:
        return sum(1 for e in self.events if e.kind == MERGED)

    @property
    def discard_count(self) -> int:
        return sum(1 for e in self.events if e.kind == DISCARDED)

    def __len__(self) -> int:
        return len(self.events)


def pair_penalty(a: FeatureFrame, b: FeatureFrame) -> float:
    """Motion penalty of an adjacent pair: variance of the two features.

    Equals (1 - cosine_sim(a, b)) / 2, so it lives in [0, 1].
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return set_variance([a.feature, b.feature])


def merge_pair(a: FeatureFrame, b: FeatureFrame) -> FeatureFrame:
    """Average two frames component-wise on their stored features."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.timestamp > b.timestamp:
        raise ValueError("frames must be time-ordered")
    feat64, ts = _merge_raw(
        a.feature.astype(np.float64), b.feature.astype(np.float64), a.timestamp, b.timestamp
    )
    return FeatureFrame(ts, feat64.astype(np.float32))


def _merge_raw(fa64, fb64, ta, tb):
    return (fa64 + fb64) / 2.0, (ta + tb) / 2.0


def _unit(feat32: np.ndarray) -> np.ndarray:
    v = feat32.astype(np.float64)
    n = float(np.linalg.norm(v))
    if n <= NORM_EPS:
        return np.zeros_like(v)
    return v / n


def _sim(ua: np.ndarray, ub: np.ndarray) -> float:
    return min(1.0, max(-1.0, float(np.dot(ua, ub))))


def reduce_cluster(
    frames: list[FeatureFrame], target: int, cfg: MergeConfig
) -> tuple[list[FeatureFrame], MergeTrace]:
    """Shrink a time-ordered frame list to exactly ``target`` frames.

    Per step the adjacent pair with maximum cosine similarity is chosen
    (ties to the smallest index). If its penalty exceeds ``cfg.delta``
    the more redundant frame is discarded, otherwise the pair is merged.
    Output timestamps are nondecreasing and stay within the input span.
    """
    frames = list(frames)
    if target < 1:
        raise ValueError("target must be >= 1")
    if target > len(frames):
        raise ValueError(f"target {target} exceeds frame count {len(frames)}")
    for prev, cur in zip(frames, frames[1:]):
        if cur.timestamp < prev.timestamp:
            raise ValueError("frames must be time-ordered")

    feats = [f.feature for f in frames]
    times = [f.timestamp for f in frames]
    ts_out, feats_out, trace = _reduce_arrays(times, feats, target, cfg.delta)
    out = [FeatureFrame._unchecked(ts, ft) for ts, ft in zip(ts_out, feats_out)]
    return out, trace


def _reduce_arrays(times, feats32, target, delta):
    """Core loop over parallel lists; returns (timestamps, features, trace)."""
    times = list(times)
    feats = [np.asarray(f, dtype=np.float32) for f in feats32]
    units = [_unit(f) for f in feats]
    sims = [_sim(units[i], units[i + 1]) for i in range(len(feats) - 1)]
    trace = MergeTrace()

    while len(feats) > target:
        i = int(np.argmax(np.asarray(sims))) if len(sims) > 1 else 0
        penalty = (1.0 - sims[i]) / 2.0  # pairwise variance of the pair
        if penalty > delta:
            j = _discard_victim(units, sims, i)
            del feats[j], units[j], times[j]
            del sims[min(j, len(sims) - 1)]
            if 0 < j < len(feats):
                sims[j - 1] = _sim(units[j - 1], units[j])
            trace.events.append(MergeEvent(DISCARDED, i, penalty))
        else:
            merged64, ts = _merge_raw(
                feats[i].astype(np.float64), feats[i + 1].astype(np.float64),
                times[i], times[i + 1],
            )
            feats[i] = merged64.astype(np.float32)
            units[i] = _unit(feats[i])
            times[i] = ts
            del feats[i + 1], units[i + 1], times[i + 1]
            del sims[i]
            if i > 0:
                sims[i - 1] = _sim(units[i - 1], units[i])
            if i < len(sims):
                sims[i] = _sim(units[i], units[i + 1])
            trace.events.append(MergeEvent(MERGED, i, penalty))
    return times, feats, trace


def _discard_victim(units, sims, i) -> int:
    """Pick which frame of pair (i, i+1) to drop.

    The frame better covered by its *other* neighbor goes; without such
    a neighbor on either side, or on a tie, the later frame goes.
    """
    if i == 0 or i + 2 >= len(units):
        return i + 1
    left = sims[i - 1]  # sim(i-1, i)
    right = sims[i + 1]  # sim(i+1, i+2)
    if abs(left - right) <= TIE_EPS:
        return i + 1
    return i if left > right else i + 1
