"""In-memory bindings over native numeric arrays.

Lets ML pipelines run the compressor and the anchor evaluator directly
on arrays they already hold, skipping the file round-trip, while
producing exactly the numbers the command-line tools would. Input
arrays follow the feature-file layout: shape (N, D+1), 32-bit floats,
column 0 timestamps.
"""

from __future__ import annotations

import warnings

import numpy as np

import mofa_select
from mofa_select import AnchorSet, CompressionConfig, EvalConfig, FeatureSequence, SegmenterConfig
from mofa_select import compress as _compress
from mofa_select import evaluate as _evaluate

__version__ = mofa_select.__version__

__all__ = ["compress_arrays", "evaluate_anchors", "__version__"]


def _check_view(view) -> np.ndarray:
    if not isinstance(view, np.ndarray):
        raise TypeError("expected 32-bit real array")
    if view.dtype != np.float32:
        raise TypeError(f"expected 32-bit real array, got dtype {view.dtype}")
    if view.ndim != 2:
        raise TypeError(f"expected a 2-D (N, D+1) array, got shape {view.shape}")
    if view.shape[1] < 2:
        raise TypeError("need a timestamp column plus at least one feature column")
    if not view.flags.c_contiguous:
        warnings.warn("input array is not C-contiguous; copying", RuntimeWarning)
        view = np.ascontiguousarray(view)
    return view


def compress_arrays(view, target_len: int, clusters: int = 6, delta: float = 0.3):
    """Compress an (N, D+1) float32 array to ``min(N, target_len)`` rows.

    Returns ``(out, report)`` where ``out`` has the same layout as the
    input and ``report`` is the mapping the CLI writes as JSON. Output
    bytes match a CLI run on the same data exactly.
    """
    view = _check_view(view)
    seq = FeatureSequence(view[:, 0].astype(np.float64), view[:, 1:])
    cfg = CompressionConfig(
        target_len=target_len,
        num_clusters=clusters,
        delta=delta,
        segmenter=SegmenterConfig(num_clusters=clusters),
    )
    out_seq, report = _compress(seq, cfg)
    out = np.empty((len(out_seq), out_seq.dim + 1), dtype=np.float32)
    out[:, 0] = out_seq.timestamps.astype(np.float32)
    out[:, 1:] = out_seq.features
    return out, report.to_dict()


def evaluate_anchors(pred_ts, gt_ts, duration: float, expansion: float = 5.0):
    """Score predicted anchor timestamps against ground truth.

    Returns the mapping the CLI ``eval`` subcommand prints. Raises
    ValueError for timestamps outside [0, duration].
    """
    preds = AnchorSet.from_timestamps(pred_ts, duration)
    gts = AnchorSet.from_timestamps(gt_ts, duration)
    report = _evaluate(preds, gts, EvalConfig(expansion=expansion))
    return report.to_dict()
