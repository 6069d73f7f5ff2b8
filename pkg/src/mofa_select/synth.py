"""Deterministic synthetic feature streams for tests and benchmarks.

Stands in for a neural frame-feature extractor: piecewise-stationary
unit-vector segments (optionally jittered) plus high-motion random-walk
bursts, with one ground-truth anchor at each segment start.

Randomness comes from a splitmix64 stream mapped to gaussians via
Box-Muller (two 64-bit draws per pair), so an identical spec produces
byte-identical output everywhere. splitmix64 is counter-based: the i-th
output is mix(seed + i * GAMMA) over wrapping 64-bit arithmetic, which
lets whole blocks of draws be generated vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import NORM_EPS, FeatureSequence
from .sdvc import Anchor, AnchorSet

STATIC = "static"
BURST = "burst"

DEFAULT_STATIC_JITTER = 0.01
DEFAULT_BURST_STEP = 0.2

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SegmentSpec:
    length: int
    kind: str
    jitter: float

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("segment length must be >= 1")
        if self.kind not in (STATIC, BURST):
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.jitter < 0:
            raise ValueError("jitter must be >= 0")


@dataclass(frozen=True)
class StreamSpec:
    dim: int
    segments: tuple[SegmentSpec, ...]
    fps: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.segments:
            raise ValueError("at least one segment required")
        if not self.fps > 0:
            raise ValueError("fps must be > 0")
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "seed", int(self.seed) & _MASK)

    @property
    def total_frames(self) -> int:
        return sum(s.length for s in self.segments)


def stream_spec_from_dict(data: dict) -> StreamSpec:
    """Build a spec from its JSON form, filling per-kind jitter defaults."""
    segments = []
    for raw in data.get("segments", []):
        kind = raw.get("kind", STATIC)
        default = DEFAULT_BURST_STEP if kind == BURST else DEFAULT_STATIC_JITTER
        segments.append(
            SegmentSpec(
                length=int(raw["length"]),
                kind=kind,
                jitter=float(raw.get("jitter", default)),
            )
        )
    return StreamSpec(
        dim=int(data["dim"]),
        segments=tuple(segments),
        fps=float(data.get("fps", 1.0)),
        seed=int(data.get("seed", 0)),
    )


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _raw_draws(seed: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64(np.uint64(seed) + idx * np.uint64(_GAMMA))


class GaussianStream:
    """Sequential standard gaussians from a seeded splitmix64 stream."""

    def __init__(self, seed: int):
        self._seed = int(seed) & _MASK
        self._pos = 0

    def take(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0, dtype=np.float64)
        first_pair = self._pos // 2
        last_pair = (self._pos + n - 1) // 2
        npairs = last_pair - first_pair + 1
        raw = _raw_draws(self._seed, 2 * first_pair, 2 * npairs)
        # (0, 1] uniforms from the top 53 bits; +1 keeps log() finite
        u = ((raw >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        gauss = np.empty(2 * npairs, dtype=np.float64)
        gauss[0::2] = radius * np.cos(theta)
        gauss[1::2] = radius * np.sin(theta)
        offset = self._pos - 2 * first_pair
        self._pos += n
        return gauss[offset : offset + n].copy()


def _draw_direction(stream: GaussianStream, dim: int) -> np.ndarray:
    for _ in range(64):
        v = stream.take(dim)
        norm = float(np.linalg.norm(v))
        if norm > NORM_EPS:
            return v / norm
    raise RuntimeError("could not draw a usable direction")


def generate_stream(spec: StreamSpec) -> tuple[FeatureSequence, AnchorSet]:
    """Produce the feature sequence and its ground-truth anchors.

    Static segments jitter around one random unit direction; burst
    segments random-walk with the segment's step size, one step per
    frame. Timestamps are frame_index / fps; anchors sit at each
    segment's first frame.
    """
    stream = GaussianStream(spec.seed)
    frames = np.empty((spec.total_frames, spec.dim), dtype=np.float32)
    anchors = []
    index = 0
    for seg_idx, seg in enumerate(spec.segments):
        anchors.append(Anchor(index / spec.fps, f"{seg.kind} segment {seg_idx}"))
        if seg.kind == STATIC:
            base = _draw_direction(stream, spec.dim)
            for _ in range(seg.length):
                vec = base + seg.jitter * stream.take(spec.dim)
                norm = float(np.linalg.norm(vec))
                while norm <= NORM_EPS:
                    vec = base + seg.jitter * stream.take(spec.dim)
                    norm = float(np.linalg.norm(vec))
                frames[index] = (vec / norm).astype(np.float32)
                index += 1
        else:
            walk = _draw_direction(stream, spec.dim)
            for _ in range(seg.length):
                vec = walk + seg.jitter * stream.take(spec.dim)
                norm = float(np.linalg.norm(vec))
                while norm <= NORM_EPS:
                    vec = walk + seg.jitter * stream.take(spec.dim)
                    norm = float(np.linalg.norm(vec))
                walk = vec / norm
                frames[index] = walk.astype(np.float32)
                index += 1

    timestamps = np.arange(spec.total_frames, dtype=np.float64) / spec.fps
    seq = FeatureSequence(timestamps, frames)
    duration = spec.total_frames / spec.fps
    return seq, AnchorSet(tuple(anchors), duration)
