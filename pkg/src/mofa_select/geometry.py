"""Domain types and numeric kernels shared by the whole pipeline.

Feature frames are stored as 32-bit vectors; every similarity, variance
and objective computation accumulates in 64-bit. Directions matter, not
magnitudes: variances and centroids are taken over L2-normalized copies
of the members, so a cluster of rescaled duplicates has zero spread.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Vectors with a norm at or below this are considered zero and rejected
# at ingestion time.
NORM_EPS = 1e-8


def _as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components")
    return arr


def cosine_sim(a, b) -> float:
    """Cosine similarity of two equal-dimension vectors, clamped to [-1, 1].

    Scale-invariant: ``cosine_sim(k*a, b) == cosine_sim(a, b)`` for k > 0.

    Raises:
        ValueError: on dimension mismatch, non-finite components, or a
            vector with norm <= 1e-8.
    """
    va = _as_vector(a, "a")
    vb = _as_vector(b, "b")
    if va.shape[0] != vb.shape[0]:
        raise ValueError(f"dimension mismatch: {va.shape[0]} vs {vb.shape[0]}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na <= NORM_EPS or nb <= NORM_EPS:
        raise ValueError("zero-norm input")
    sim = float(np.dot(va, vb)) / (na * nb)
    return min(1.0, max(-1.0, sim))


def unit_rows(features: np.ndarray) -> np.ndarray:
    """Row-wise L2 normalization in float64. Zero rows map to zero rows."""
    rows = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(rows, axis=1)
    safe = np.where(norms > NORM_EPS, norms, 1.0)
    out = rows / safe[:, None]
    out[norms <= NORM_EPS] = 0.0
    return out


def set_variance(vectors) -> float:
    """Spread of a set of vectors around its normalized centroid.

    Each vector is L2-normalized, the centroid of the normalized copies
    is taken, and the mean squared Euclidean distance to that centroid
    is returned. A singleton set yields 0; for exactly two vectors this
    equals ``(1 - cosine_sim) / 2`` and therefore lives in [0, 1].

    Raises:
        ValueError: on an empty set, non-finite components, dimension
            mismatch, or a zero-norm member.
    """
    mat = [_as_vector(v) for v in vectors]
    if not mat:
        raise ValueError("empty set")
    dim = mat[0].shape[0]
    for v in mat[1:]:
        if v.shape[0] != dim:
            raise ValueError(f"dimension mismatch: {v.shape[0]} vs {dim}")
    rows = np.stack(mat)
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms <= NORM_EPS):
        raise ValueError("zero-norm member")
    units = rows / norms[:, None]
    centroid = units.mean(axis=0)
    sq = np.sum((units - centroid) ** 2, axis=1)
    return float(sq.mean())


@dataclass(frozen=True, eq=False)
class FeatureFrame:
    """One timestamped feature vector (seconds, 32-bit components)."""

    timestamp: float
    feature: np.ndarray

    def __post_init__(self):
        feat = np.asarray(self.feature, dtype=np.float32)
        if feat.ndim != 1:
            raise ValueError(f"feature must be 1-D, got shape {feat.shape}")
        if not np.all(np.isfinite(feat)):
            raise ValueError("feature has non-finite components")
        if float(np.linalg.norm(feat.astype(np.float64))) <= NORM_EPS:
            raise ValueError("zero-norm feature")
        ts = float(self.timestamp)
        if not np.isfinite(ts) or ts < 0.0:
            raise ValueError(f"timestamp must be a non-negative real, got {ts}")
        object.__setattr__(self, "feature", feat)
        object.__setattr__(self, "timestamp", ts)

    @property
    def dim(self) -> int:
        return int(self.feature.shape[0])

    @classmethod
    def _unchecked(cls, timestamp: float, feature: np.ndarray) -> "FeatureFrame":
        # Assembly path for merge outputs, which may legitimately carry
        # repeated timestamps and skip ingestion checks.
        obj = cls.__new__(cls)
        object.__setattr__(obj, "timestamp", timestamp)
        object.__setattr__(obj, "feature", feature)
        return obj


class FeatureSequence:
    """Ordered timestamped feature frames with a common dimension.

    Timestamps must be strictly increasing at ingestion; sequences that
    come out of the merging stage may carry repeated timestamps and are
    built through :meth:`merged`, which relaxes the checks that only
    hold for raw input (strict time order, nonzero norms).
    """

    __slots__ = ("_timestamps", "_features")

    def __init__(self, timestamps, features):
        ts = np.asarray(timestamps, dtype=np.float64)
        feats = np.asarray(features, dtype=np.float32)
        self._validate_common(ts, feats)
        if len(ts) > 1 and not np.all(np.diff(ts) > 0):
            raise ValueError("non-increasing timestamps")
        norms = np.linalg.norm(feats.astype(np.float64), axis=1)
        if np.any(norms <= NORM_EPS):
            raise ValueError("zero-norm row")
        self._timestamps = ts
        self._features = feats
        self._freeze()

    @classmethod
    def merged(cls, timestamps, features) -> "FeatureSequence":
        """Build a post-merge sequence (nondecreasing timestamps allowed)."""
        obj = cls.__new__(cls)
        ts = np.asarray(timestamps, dtype=np.float64)
        feats = np.asarray(features, dtype=np.float32)
        cls._validate_common(ts, feats)
        if len(ts) > 1 and not np.all(np.diff(ts) >= 0):
            raise ValueError("decreasing timestamps")
        obj._timestamps = ts
        obj._features = feats
        obj._freeze()
        return obj

    @staticmethod
    def _validate_common(ts: np.ndarray, feats: np.ndarray):
        if feats.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {feats.shape}")
        if ts.ndim != 1 or ts.shape[0] != feats.shape[0]:
            raise ValueError("timestamps and features disagree on frame count")
        if feats.shape[0] < 1:
            raise ValueError("sequence needs at least one frame")
        if feats.shape[1] < 1:
            raise ValueError("feature dimension must be positive")
        if not np.all(np.isfinite(feats)):
            raise ValueError("non-finite feature components")
        if not np.all(np.isfinite(ts)) or np.any(ts < 0.0):
            raise ValueError("timestamps must be finite and non-negative")

    def _freeze(self):
        self._timestamps.setflags(write=False)
        self._features.setflags(write=False)

    @classmethod
    def from_frames(cls, frames) -> "FeatureSequence":
        frames = list(frames)
        if not frames:
            raise ValueError("sequence needs at least one frame")
        ts = np.array([f.timestamp for f in frames], dtype=np.float64)
        feats = np.stack([f.feature for f in frames]).astype(np.float32)
        return cls(ts, feats)

    @property
    def dim(self) -> int:
        return int(self._features.shape[1])

    @property
    def timestamps(self) -> np.ndarray:
        return self._timestamps

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def frames(self) -> list[FeatureFrame]:
        return [self.frame(i) for i in range(len(self))]

    def frame(self, i: int) -> FeatureFrame:
        return FeatureFrame(float(self._timestamps[i]), self._features[i].copy())

    def __len__(self) -> int:
        return int(self._features.shape[0])

    def __repr__(self) -> str:
        return f"FeatureSequence(n={len(self)}, dim={self.dim})"


@dataclass(frozen=True)
class Partition:
    """Contiguous clustering as boundary indices b_0=0 < ... < b_U=N.

    Cluster k covers frame indices [boundaries[k], boundaries[k+1]).
    """

    boundaries: tuple[int, ...]

    def __post_init__(self):
        bs = tuple(int(b) for b in self.boundaries)
        if len(bs) < 2:
            raise ValueError("partition needs at least two boundaries")
        if bs[0] != 0:
            raise ValueError("first boundary must be 0")
        if any(b1 >= b2 for b1, b2 in zip(bs, bs[1:])):
            raise ValueError("boundaries must be strictly increasing")
        object.__setattr__(self, "boundaries", bs)

    @property
    def num_clusters(self) -> int:
        return len(self.boundaries) - 1

    def sizes(self) -> list[int]:
        return [b2 - b1 for b1, b2 in zip(self.boundaries, self.boundaries[1:])]

    def check_covers(self, n: int):
        if self.boundaries[-1] != n:
            raise ValueError(
                f"invalid partition: covers {self.boundaries[-1]} frames, sequence has {n}"
            )

    def members(self, k: int) -> range:
        return range(self.boundaries[k], self.boundaries[k + 1])


@dataclass(frozen=True)
class ClusterStats:
    """Per-cluster summary: centroid of normalized members, spread, score."""

    centroid: np.ndarray
    variance: float
    motion_score: float = field(default=0.0)

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be non-negative")
        if not 0.0 <= self.motion_score <= 1.0:
            raise ValueError("motion_score must lie in [0, 1]")


def cluster_objective(seq: FeatureSequence, p: Partition) -> float:
    """Cumulative cosine distance of every frame to its cluster centroid.

    The centroid is the mean of the L2-normalized cluster members and is
    not re-normalized before the similarity (cosine normalizes its inputs
    internally). A centroid that collapses to zero contributes distance 1
    per member. Zero iff every cluster's members are pairwise colinear.
    """
    p.check_covers(len(seq))
    units = unit_rows(seq.features)
    total = 0.0
    for k in range(p.num_clusters):
        lo, hi = p.boundaries[k], p.boundaries[k + 1]
        members = units[lo:hi]
        centroid = members.mean(axis=0)
        cnorm = float(np.linalg.norm(centroid))
        if cnorm <= NORM_EPS:
            total += float(hi - lo)
            continue
        sims = np.clip(members @ centroid / cnorm, -1.0, 1.0)
        total += float(np.sum(1.0 - sims))
    return total
