"""Command-line surface: compress, segment, eval, synth, posenc, inspect.

Exit codes: 0 success, 1 validation error (bad input data or parameter
values), 2 usage error (unknown subcommand, malformed flags). ``eval``
and ``inspect`` print machine-readable JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fileio
from .compressor import CompressionConfig, compress
from .geometry import cluster_objective
from .posenc import EmbeddingTable, extend_interpolate, extend_periodic
from .sdvc import EvalConfig, evaluate
from .segmenter import SegmenterConfig, segment
from .synth import generate_stream, stream_spec_from_dict


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mofa",
        description="Motion-aware feature-sequence compression toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a feature file to a target length")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--report", dest="report", default=None)
    p.add_argument("--target-len", type=int, default=96)
    p.add_argument("--clusters", type=int, default=6)
    p.add_argument("--delta", type=float, default=0.3)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--exact-threshold", type=int, default=512)

    p = sub.add_parser("segment", help="print the contiguous clustering of a feature file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--clusters", type=int, default=6)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--exact-threshold", type=int, default=512)

    p = sub.add_parser("eval", help="score predicted anchors against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--manifest", default=None)
    p.add_argument("--expansion", type=float, default=5.0)
    p.add_argument("--f1-threshold", type=float, default=0.5)
    p.add_argument("--thresholds", default="0.3,0.5,0.7,0.9")

    p = sub.add_parser("synth", help="generate a synthetic stream from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out-features", required=True)
    p.add_argument("--out-anchors", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("posenc", help="extend a positional-embedding table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--mode", choices=["periodic", "interpolate"], required=True)
    p.add_argument("--len", dest="new_len", type=int, required=True)

    p = sub.add_parser("inspect", help="print a JSON summary of a feature file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--manifest", default=None)

    return parser


def _cmd_compress(args) -> int:
    if args.target_len < 1:
        raise ValueError("target-len must be ≥ 1")
    if args.clusters < 1:
        raise ValueError("clusters must be ≥ 1")
    if args.delta < 0:
        raise ValueError("delta must be ≥ 0")
    seq = fileio.read_feature_file(args.infile)
    cfg = CompressionConfig(
        target_len=args.target_len,
        num_clusters=args.clusters,
        delta=args.delta,
        segmenter=SegmenterConfig(
            num_clusters=args.clusters,
            max_iters=args.max_iters,
            exact_threshold=args.exact_threshold,
        ),
    )
    out, report = compress(seq, cfg)
    fileio.write_feature_file(out, args.outfile)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh)
            fh.write("\n")
    return 0


def _cmd_segment(args) -> int:
    if args.clusters < 1:
        raise ValueError("clusters must be ≥ 1")
    seq = fileio.read_feature_file(args.infile)
    cfg = SegmenterConfig(
        num_clusters=args.clusters,
        max_iters=args.max_iters,
        exact_threshold=args.exact_threshold,
    )
    part = segment(seq, cfg)
    print(
        json.dumps(
            {
                "schema": 1,
                "input_len": len(seq),
                "clusters": part.num_clusters,
                "boundaries": list(part.boundaries),
                "objective": cluster_objective(seq, part),
            }
        )
    )
    return 0


def _cmd_eval(args) -> int:
    if args.duration is None and args.manifest is None:
        raise ValueError("need --duration or --manifest")
    duration = args.duration
    if duration is None:
        duration = fileio.read_manifest(args.manifest).duration
    thresholds = tuple(float(t) for t in args.thresholds.split(",") if t.strip())
    cfg = EvalConfig(
        expansion=args.expansion,
        thresholds=thresholds,
        f1_threshold=args.f1_threshold,
    )
    preds = fileio.read_anchor_file(args.pred, duration)
    gts = fileio.read_anchor_file(args.gt, duration)
    report = evaluate(preds, gts, cfg)
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_synth(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = stream_spec_from_dict(json.load(fh))
    seq, anchors = generate_stream(spec)
    fileio.write_feature_file(seq, args.out_features)
    fileio.write_anchor_file(anchors, args.out_anchors)
    if args.manifest:
        manifest = fileio.Manifest(
            duration=anchors.duration,
            fps=spec.fps,
            dim=spec.dim,
            frame_count=len(seq),
            features=str(args.out_features),
            anchors=str(args.out_anchors),
        )
        fileio.write_manifest(manifest, args.manifest)
    return 0


def _cmd_posenc(args) -> int:
    if args.new_len < 1:
        raise ValueError("len must be ≥ 1")
    table = EmbeddingTable(fileio.read_array(args.infile))
    if args.mode == "periodic":
        out = extend_periodic(table, args.new_len)
    else:
        out = extend_interpolate(table, args.new_len)
    fileio.write_array(out.values, args.outfile)
    return 0


def _cmd_inspect(args) -> int:
    seq = fileio.read_feature_file(args.infile)
    summary = {
        "schema": 1,
        "frames": len(seq),
        "dim": seq.dim,
        "t_first": float(seq.timestamps[0]),
        "t_last": float(seq.timestamps[-1]),
    }
    if args.manifest:
        manifest = fileio.read_manifest(args.manifest)
        fileio.check_manifest(manifest, seq)
        summary["duration"] = manifest.duration
        summary["fps"] = manifest.fps
    print(json.dumps(summary))
    return 0


_COMMANDS = {
    "compress": _cmd_compress,
    "segment": _cmd_segment,
    "eval": _cmd_eval,
    "synth": _cmd_synth,
    "posenc": _cmd_posenc,
    "inspect": _cmd_inspect,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
