"""File formats: feature arrays, anchor JSONL, manifest JSON.

Feature files use the standard binary array container (magic
``\\x93NUMPY``, format version 1.0, a python-literal header declaring
little-endian float32 in row-major order) with shape (N, D+1): column 0
holds timestamps in seconds, columns 1..D the feature vector. The writer
emits one canonical byte encoding (64-byte aligned, space-padded
header), so equal sequences produce equal files.
"""

from __future__ import annotations

import ast
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import FeatureSequence
from .sdvc import Anchor, AnchorSet

_MAGIC = b"\x93NUMPY"


def write_array(arr: np.ndarray, path) -> None:
    """Write a 2-D float32 array in the canonical container encoding."""
    arr = np.ascontiguousarray(arr, dtype=np.float32)
    if arr.ndim != 2:
        raise ValueError(f"array must be 2-D, got shape {arr.shape}")
    header = (
        "{'descr': '<f4', 'fortran_order': False, "
        f"'shape': ({arr.shape[0]}, {arr.shape[1]}), }}"
    )
    # magic(6) + version(2) + header-length(2) + header, padded to a
    # 64-byte multiple and newline-terminated.
    pad = 64 - ((10 + len(header) + 1) % 64)
    pad = 0 if pad == 64 else pad
    header_bytes = (header + " " * pad + "\n").encode("latin1")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(bytes((1, 0)))
        fh.write(len(header_bytes).to_bytes(2, "little"))
        fh.write(header_bytes)
        fh.write(arr.tobytes(order="C"))


def read_array(path) -> np.ndarray:
    """Read a 2-D little-endian float32 array; rejects anything else."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:6] != _MAGIC:
        raise ValueError(f"bad magic in {path}")
    if len(blob) < 10:
        raise ValueError(f"truncated header in {path}")
    major = blob[6]
    if major == 1:
        hlen = int.from_bytes(blob[8:10], "little")
        body = 10
    elif major == 2:
        if len(blob) < 12:
            raise ValueError(f"truncated header in {path}")
        hlen = int.from_bytes(blob[8:12], "little")
        body = 12
    else:
        raise ValueError(f"unsupported format version {major} in {path}")
    try:
        header = ast.literal_eval(blob[body : body + hlen].decode("latin1"))
    except (ValueError, SyntaxError) as exc:
        raise ValueError(f"unparseable header in {path}") from exc
    if header.get("descr") != "<f4":
        raise ValueError(f"unsupported dtype {header.get('descr')!r} (need '<f4')")
    if header.get("fortran_order") is not False:
        raise ValueError("unsupported order (need row-major)")
    shape = header.get("shape")
    if not isinstance(shape, tuple) or len(shape) != 2:
        raise ValueError(f"array rank must be 2, header declares shape {shape}")
    n, d = (int(x) for x in shape)
    data = blob[body + hlen :]
    if len(data) != n * d * 4:
        raise ValueError(f"truncated data in {path}: {len(data)} bytes for shape {shape}")
    return np.frombuffer(data, dtype="<f4").reshape(n, d)


def write_feature_file(seq: FeatureSequence, path) -> None:
    """Write a sequence as an (N, D+1) array, timestamps in column 0."""
    if len(seq) == 0:
        raise ValueError("refusing to write zero frames")
    out = np.empty((len(seq), seq.dim + 1), dtype=np.float32)
    out[:, 0] = seq.timestamps.astype(np.float32)
    out[:, 1:] = seq.features
    write_array(out, path)


def read_feature_file(path) -> FeatureSequence:
    """Read and validate a feature file written by :func:`write_feature_file`."""
    arr = read_array(path)
    if arr.shape[0] < 1:
        raise ValueError(f"no frames in {path}")
    if arr.shape[1] < 2:
        raise ValueError(f"need timestamps plus at least one feature column in {path}")
    ts = arr[:, 0].astype(np.float64)
    if len(ts) > 1 and not np.all(np.diff(ts) > 0):
        raise ValueError(f"non-increasing timestamps in {path}")
    return FeatureSequence(ts, arr[:, 1:])


def write_anchor_file(anchors: AnchorSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in anchors.items:
            fh.write(json.dumps({"t": a.timestamp, "caption": a.caption}) + "\n")


def read_anchor_file(path, duration: float) -> AnchorSet:
    """Read JSONL anchors ({"t": seconds, "caption": text}, one per line)."""
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON") from exc
            if not isinstance(obj, dict) or "t" not in obj or "caption" not in obj:
                raise ValueError(f"{path}:{lineno}: need fields 't' and 'caption'")
            t = obj["t"]
            caption = obj["caption"]
            if not isinstance(t, (int, float)) or isinstance(t, bool):
                raise ValueError(f"{path}:{lineno}: 't' must be a number")
            if not isinstance(caption, str):
                raise ValueError(f"{path}:{lineno}: 'caption' must be a string")
            items.append(Anchor(float(t), caption))
    return AnchorSet(tuple(items), float(duration))


@dataclass(frozen=True)
class Manifest:
    duration: float
    fps: float
    dim: int
    frame_count: int
    features: str
    anchors: str
    version: str = "1"

    def __post_init__(self):
        if self.version != "1":
            raise ValueError(f"unrecognized manifest version {self.version!r}")
        if self.duration < 0 or self.fps <= 0:
            raise ValueError("duration must be >= 0 and fps > 0")
        if self.dim < 1 or self.frame_count < 1:
            raise ValueError("dim and frame_count must be >= 1")

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "duration": self.duration,
            "fps": self.fps,
            "dim": self.dim,
            "frame_count": self.frame_count,
            "features": self.features,
            "anchors": self.anchors,
        }


def write_manifest(manifest: Manifest, path) -> None:
    Path(path).write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")


def read_manifest(path) -> Manifest:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid manifest JSON in {path}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"manifest must be a JSON object in {path}")
    try:
        return Manifest(
            version=str(data["version"]),
            duration=float(data["duration"]),
            fps=float(data["fps"]),
            dim=int(data["dim"]),
            frame_count=int(data["frame_count"]),
            features=str(data["features"]),
            anchors=str(data["anchors"]),
        )
    except KeyError as exc:
        raise ValueError(f"manifest missing field {exc} in {path}") from exc


def check_manifest(manifest: Manifest, seq: FeatureSequence) -> None:
    """Cross-check a manifest against a loaded feature sequence."""
    if manifest.frame_count != len(seq):
        raise ValueError(
            f"manifest frame_count {manifest.frame_count} does not match feature file ({len(seq)} rows)"
        )
    if manifest.dim != seq.dim:
        raise ValueError(f"manifest dim {manifest.dim} does not match feature file ({seq.dim})")


def thread_cap() -> int:
    """Parallelism cap from MOFA_THREADS (0 or unset/invalid = auto).

    The numeric kernels are sequential by construction, so any value
    yields identical results; the cap is accepted for interface
    stability.
    """
    raw = os.environ.get("MOFA_THREADS", "0")
    try:
        val = int(raw)
    except ValueError:
        return 0
    return max(0, val)
