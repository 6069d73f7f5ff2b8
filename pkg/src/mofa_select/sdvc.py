"""Single-anchor temporal evaluation.

Predicted and ground-truth anchors (one timestamp each, captions carried
but not scored) are expanded into symmetric windows clamped to the video
span. Pairs are matched one-to-one greedily by descending interval IoU,
and precision/recall are reported at each IoU threshold, plus an F1 at
the configured operating threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_THRESHOLDS = (0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class Anchor:
    timestamp: float
    caption: str = ""


@dataclass(frozen=True)
class AnchorSet:
    """Anchors over one video of the given duration. May be empty."""

    items: tuple[Anchor, ...]
    duration: float

    def __post_init__(self):
        items = tuple(self.items)
        if self.duration < 0:
            raise ValueError("duration must be non-negative")
        for a in items:
            if not 0.0 <= a.timestamp <= self.duration:
                raise ValueError(
                    f"anchor timestamp {a.timestamp} outside [0, {self.duration}]"
                )
        object.__setattr__(self, "items", items)

    @classmethod
    def from_timestamps(cls, stamps, duration: float, captions=None) -> "AnchorSet":
        stamps = [float(t) for t in stamps]
        if captions is None:
            captions = [""] * len(stamps)
        return cls(tuple(Anchor(t, c) for t, c in zip(stamps, captions)), float(duration))

    def timestamps(self) -> list[float]:
        return [a.timestamp for a in self.items]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class EvalConfig:
    expansion: float = 5.0
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    f1_threshold: float = 0.5

    def __post_init__(self):
        if not self.expansion > 0:
            raise ValueError("expansion must be > 0")
        ths = tuple(float(t) for t in self.thresholds)
        if not ths or any(not 0.0 < t <= 1.0 for t in ths):
            raise ValueError("thresholds must lie in (0, 1]")
        if not 0.0 < self.f1_threshold <= 1.0:
            raise ValueError("f1_threshold must lie in (0, 1]")
        object.__setattr__(self, "thresholds", ths)


@dataclass
class MatchedPair:
    pred_index: int
    gt_index: int
    iou: float


@dataclass
class EvalReport:
    thresholds: tuple[float, ...]
    precision: dict[float, float]
    recall: dict[float, float]
    f1: float
    f1_threshold: float
    matches: list[MatchedPair] = field(default_factory=list)
    num_pred: int = 0
    num_gt: int = 0

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "num_pred": self.num_pred,
            "num_gt": self.num_gt,
            "thresholds": [float(t) for t in self.thresholds],
            "precision": {repr(float(t)): self.precision[t] for t in self.thresholds},
            "recall": {repr(float(t)): self.recall[t] for t in self.thresholds},
            "f1_threshold": float(self.f1_threshold),
            "f1": self.f1,
            "matches": [
                {"pred": m.pred_index, "gt": m.gt_index, "iou": m.iou}
                for m in self.matches
            ],
        }


def anchor_window(t: float, cfg: EvalConfig, duration: float) -> tuple[float, float]:
    """Symmetric window around an instant, clamped to [0, duration]."""
    if not 0.0 <= t <= duration:
        raise ValueError(f"timestamp {t} outside [0, {duration}]")
    return (max(0.0, t - cfg.expansion), min(duration, t + cfg.expansion))


def interval_iou(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Intersection over union of two closed intervals.

    A zero-length union counts as 1 for identical intervals and 0
    otherwise.
    """
    if a[0] > a[1] or b[0] > b[1]:
        raise ValueError("inverted interval")
    inter = max(0.0, min(a[1], b[1]) - max(a[0], b[0]))
    union = (a[1] - a[0]) + (b[1] - b[0]) - inter
    if union <= 0.0:
        return 1.0 if a == b else 0.0
    return inter / union


def _greedy_match(pred_windows, gt_windows, preds, gts) -> list[MatchedPair]:
    pairs = []
    for i, pw in enumerate(pred_windows):
        for j, gw in enumerate(gt_windows):
            iou = interval_iou(pw, gw)
            if iou > 0.0:
                pairs.append((iou, preds[i], gts[j], i, j))
    # Descending IoU; ties by earlier pred timestamp, then earlier gt
    # timestamp (and finally index order via sort stability).
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
    used_pred: set[int] = set()
    used_gt: set[int] = set()
    matches = []
    for iou, _, _, i, j in pairs:
        if i in used_pred or j in used_gt:
            continue
        used_pred.add(i)
        used_gt.add(j)
        matches.append(MatchedPair(i, j, iou))
    return matches


def evaluate(preds: AnchorSet, gts: AnchorSet, cfg: EvalConfig = EvalConfig()) -> EvalReport:
    """Score predicted anchors against ground truth.

    Precision at a threshold is the fraction of predictions whose
    matched IoU clears it; recall the fraction of ground-truth anchors.
    Rates over an empty side are defined as 0.
    """
    if preds.duration != gts.duration:
        raise ValueError(
            f"duration mismatch: {preds.duration} vs {gts.duration}"
        )
    pred_ts = preds.timestamps()
    gt_ts = gts.timestamps()
    pred_windows = [anchor_window(t, cfg, preds.duration) for t in pred_ts]
    gt_windows = [anchor_window(t, cfg, gts.duration) for t in gt_ts]
    matches = _greedy_match(pred_windows, gt_windows, pred_ts, gt_ts)

    precision: dict[float, float] = {}
    recall: dict[float, float] = {}
    for th in cfg.thresholds:
        hits = sum(1 for m in matches if m.iou >= th)
        precision[th] = hits / len(pred_ts) if pred_ts else 0.0
        recall[th] = hits / len(gt_ts) if gt_ts else 0.0

    hits_f1 = sum(1 for m in matches if m.iou >= cfg.f1_threshold)
    p = hits_f1 / len(pred_ts) if pred_ts else 0.0
    r = hits_f1 / len(gt_ts) if gt_ts else 0.0
    f1 = 2.0 * p * r / (p + r) if p + r > 0 else 0.0

    return EvalReport(
        thresholds=cfg.thresholds,
        precision=precision,
        recall=recall,
        f1=f1,
        f1_threshold=cfg.f1_threshold,
        matches=matches,
        num_pred=len(pred_ts),
        num_gt=len(gt_ts),
    )
