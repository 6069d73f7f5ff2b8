"""Full compression pipeline: segment, score, allocate, reduce, concat.

Sequences already at or under the target length pass through untouched.
Everything else is segmented into contiguous clusters, each cluster gets
an integer frame budget weighted by its motion score, and the merging
stage shrinks every cluster to its budget. The concatenated result has
exactly the target length, with timestamps inside the input span.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .allocator import allocate
from .geometry import FeatureSequence
from .merger import MergeConfig, MergeTrace, _reduce_arrays
from .segmenter import SegmenterConfig, segment


@dataclass(frozen=True)
class CompressionConfig:
    target_len: int = 96
    num_clusters: int = 6
    delta: float = 0.3
    segmenter: SegmenterConfig = field(default_factory=SegmenterConfig)

    def __post_init__(self):
        if self.target_len < 1:
            raise ValueError("target_len must be >= 1")
        if self.num_clusters < 1:
            raise ValueError("num_clusters must be >= 1")
        MergeConfig(self.delta)  # validates delta


@dataclass
class CompressionReport:
    input_len: int
    output_len: int
    passthrough: bool
    boundaries: list[int]
    variances: list[float]
    motion_scores: list[float]
    r_origin: list[int]
    r_raw: list[int]
    r_final: list[int]
    traces: list[MergeTrace]
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        """Flat mapping matching the serialized report schema."""
        return {
            "schema": 1,
            "input_len": self.input_len,
            "output_len": self.output_len,
            "boundaries": list(self.boundaries),
            "motion_scores": [float(s) for s in self.motion_scores],
            "r_origin": list(self.r_origin),
            "r_raw": list(self.r_raw),
            "r_final": list(self.r_final),
            "merges": [t.merge_count for t in self.traces],
            "discards": [t.discard_count for t in self.traces],
            "elapsed_ms": float(self.elapsed_ms),
        }


@dataclass(frozen=True)
class TokenBudget:
    window_len: int
    stride: int
    queries_per_window: int
    window_count: int
    total_tokens: int


def compress(seq: FeatureSequence, cfg: CompressionConfig) -> tuple[FeatureSequence, CompressionReport]:
    """Compress a sequence to ``min(len(seq), cfg.target_len)`` frames.

    Deterministic: identical input and config give byte-identical output
    features, timestamps and report (timing aside).
    """
    start = time.perf_counter()
    n_o = len(seq)
    n_p = cfg.target_len

    if n_o <= n_p:
        report = CompressionReport(
            input_len=n_o,
            output_len=n_o,
            passthrough=True,
            boundaries=[],
            variances=[],
            motion_scores=[],
            r_origin=[],
            r_raw=[],
            r_final=[],
            traces=[],
        )
        # merged() keeps whatever time ordering the input carried
        out = FeatureSequence.merged(seq.timestamps.copy(), seq.features.copy())
        report.elapsed_ms = (time.perf_counter() - start) * 1000.0
        return out, report

    u = min(cfg.num_clusters, n_p, n_o)
    seg_cfg = replace(cfg.segmenter, num_clusters=u)
    partition = segment(seq, seg_cfg)
    alloc, variances, scores = allocate(seq, partition, n_p)

    out_ts: list[float] = []
    out_feats: list[np.ndarray] = []
    traces: list[MergeTrace] = []
    for k in range(partition.num_clusters):
        lo, hi = partition.boundaries[k], partition.boundaries[k + 1]
        ts, feats, trace = _reduce_arrays(
            seq.timestamps[lo:hi].tolist(),
            list(seq.features[lo:hi]),
            alloc.r_final[k],
            cfg.delta,
        )
        out_ts.extend(ts)
        out_feats.extend(feats)
        traces.append(trace)

    out = FeatureSequence.merged(np.array(out_ts, dtype=np.float64), np.stack(out_feats))
    report = CompressionReport(
        input_len=n_o,
        output_len=len(out),
        passthrough=False,
        boundaries=list(partition.boundaries),
        variances=variances,
        motion_scores=scores,
        r_origin=alloc.r_origin,
        r_raw=alloc.r_raw,
        r_final=alloc.r_final,
        traces=traces,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )
    return out, report


def format_timestamp_prompt(seq: FeatureSequence) -> str:
    """Fixed-template frame summary with one-decimal timestamps."""
    if len(seq) == 0:
        raise ValueError("empty sequence")
    stamps = ", ".join(f"{t:.1f}" for t in seq.timestamps)
    return f"This video contains {len(seq)} frames sampled at {stamps} seconds."


def plan_token_budget(
    n_frames: int, window_len: int, stride: int, queries_per_window: int
) -> TokenBudget:
    """Token count of a sliding-window aggregator over ``n_frames``.

    The stride must divide the frame count evenly; adjust the compressed
    length otherwise.
    """
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    if n_frames < window_len:
        raise ValueError(f"n_frames {n_frames} below window_len {window_len}")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if queries_per_window < 1:
        raise ValueError("queries_per_window must be >= 1")
    if n_frames % stride != 0:
        raise ValueError(f"stride {stride} does not divide frame count {n_frames}")
    windows = n_frames // stride
    return TokenBudget(
        window_len=window_len,
        stride=stride,
        queries_per_window=queries_per_window,
        window_count=windows,
        total_tokens=windows * queries_per_window,
    )
