"""Motion-aware fine-to-coarse compression for timestamped feature sequences."""

from .allocator import Allocation, allocate, motion_scores, raw_budgets, scale_budgets
from .compressor import (
    CompressionConfig,
    CompressionReport,
    TokenBudget,
    compress,
    format_timestamp_prompt,
    plan_token_budget,
)
from .geometry import (
    ClusterStats,
    FeatureFrame,
    FeatureSequence,
    Partition,
    cluster_objective,
    cosine_sim,
    set_variance,
)
from .merger import MergeConfig, MergeEvent, MergeTrace, merge_pair, pair_penalty, reduce_cluster
from .posenc import EmbeddingTable, extend_interpolate, extend_periodic
from .sdvc import Anchor, AnchorSet, EvalConfig, EvalReport, anchor_window, evaluate, interval_iou
from .segmenter import SegmenterConfig, dp_optimal_partition, init_partition, segment
from .synth import GaussianStream, SegmentSpec, StreamSpec, generate_stream, stream_spec_from_dict

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "Anchor",
    "AnchorSet",
    "ClusterStats",
    "CompressionConfig",
    "CompressionReport",
    "EmbeddingTable",
    "EvalConfig",
    "EvalReport",
    "FeatureFrame",
    "FeatureSequence",
    "GaussianStream",
    "MergeConfig",
    "MergeEvent",
    "MergeTrace",
    "Partition",
    "SegmentSpec",
    "SegmenterConfig",
    "StreamSpec",
    "TokenBudget",
    "allocate",
    "anchor_window",
    "cluster_objective",
    "compress",
    "cosine_sim",
    "dp_optimal_partition",
    "evaluate",
    "extend_interpolate",
    "extend_periodic",
    "format_timestamp_prompt",
    "generate_stream",
    "init_partition",
    "interval_iou",
    "merge_pair",
    "motion_scores",
    "pair_penalty",
    "plan_token_budget",
    "raw_budgets",
    "reduce_cluster",
    "scale_budgets",
    "segment",
    "set_variance",
    "stream_spec_from_dict",
    "__version__",
]
