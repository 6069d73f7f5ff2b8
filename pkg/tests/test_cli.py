"""Command-line surface: exit codes, JSON output, determinism."""

import json

import numpy as np
import pytest

from mofa_select import FeatureSequence
from mofa_select.cli import main
from mofa_select.fileio import read_array, write_array, write_feature_file


@pytest.fixture
def stream_files(tmp_path):
    spec = {
        "dim": 16,
        "fps": 1.0,
        "seed": 7,
        "segments": [
            {"length": 100, "kind": "static"},
            {"length": 100, "kind": "static"},
            {"length": 100, "kind": "static"},
            {"length": 100, "kind": "burst"},
        ],
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    feat = tmp_path / "X.npy"
    anch = tmp_path / "gt.jsonl"
    manifest = tmp_path / "m.json"
    code = main([
        "synth", "--spec", str(spec_path),
        "--out-features", str(feat),
        "--out-anchors", str(anch),
        "--manifest", str(manifest),
    ])
    assert code == 0
    return feat, anch, manifest


class TestCompressCommand:
    def test_end_to_end(self, stream_files, tmp_path):
        feat, _, _ = stream_files
        out = tmp_path / "Y.npy"
        report = tmp_path / "r.json"
        code = main([
            "compress", "--in", str(feat), "--target-len", "60",
            "--clusters", "6", "--delta", "0.3",
            "--out", str(out), "--report", str(report),
        ])
        assert code == 0
        arr = read_array(out)
        assert arr.shape == (60, 17)
        rep = json.loads(report.read_text())
        assert rep["schema"] == 1
        assert rep["input_len"] == 400
        assert rep["output_len"] == 60
        assert sum(rep["r_final"]) == 60
        assert set(rep) == {
            "schema", "input_len", "output_len", "boundaries", "motion_scores",
            "r_origin", "r_raw", "r_final", "merges", "discards", "elapsed_ms",
        }

    def test_deterministic_output_files(self, stream_files, tmp_path):
        feat, _, _ = stream_files
        outs, reports = [], []
        for tag in ("1", "2"):
            out = tmp_path / f"Y{tag}.npy"
            report = tmp_path / f"r{tag}.json"
            assert main([
                "compress", "--in", str(feat), "--target-len", "50",
                "--out", str(out), "--report", str(report),
            ]) == 0
            outs.append(out.read_bytes())
            rep = json.loads(report.read_text())
            rep.pop("elapsed_ms")
            reports.append(rep)
        assert outs[0] == outs[1]
        assert reports[0] == reports[1]

    def test_target_len_zero_fails_validation(self, stream_files, tmp_path, capsys):
        feat, _, _ = stream_files
        code = main([
            "compress", "--in", str(feat), "--target-len", "0",
            "--out", str(tmp_path / "Y.npy"),
        ])
        assert code == 1
        assert "target-len must be ≥ 1" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path):
        code = main([
            "compress", "--in", str(tmp_path / "nope.npy"),
            "--out", str(tmp_path / "Y.npy"),
        ])
        assert code == 1


class TestEvalCommand:
    def test_self_match_is_perfect(self, stream_files, capsys):
        _, anch, _ = stream_files
        code = main(["eval", "--pred", str(anch), "--gt", str(anch), "--duration", "400"])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["precision"] == {"0.3": 1.0, "0.5": 1.0, "0.7": 1.0, "0.9": 1.0}
        assert rep["f1"] == 1.0

    def test_duration_from_manifest(self, stream_files, capsys):
        _, anch, manifest = stream_files
        code = main(["eval", "--pred", str(anch), "--gt", str(anch), "--manifest", str(manifest)])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["f1"] == 1.0

    def test_needs_duration_or_manifest(self, stream_files, capsys):
        _, anch, _ = stream_files
        code = main(["eval", "--pred", str(anch), "--gt", str(anch)])
        assert code == 1
        assert "--duration or --manifest" in capsys.readouterr().err


class TestSegmentCommand:
    def test_prints_boundaries(self, stream_files, capsys):
        feat, _, _ = stream_files
        code = main(["segment", "--in", str(feat), "--clusters", "4"])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["boundaries"][0] == 0
        assert rep["boundaries"][-1] == 400
        assert rep["clusters"] == 4
        assert rep["objective"] >= 0

    def test_zero_clusters_is_validation_error(self, stream_files, capsys):
        feat, _, _ = stream_files
        assert main(["segment", "--in", str(feat), "--clusters", "0"]) == 1
        assert "clusters" in capsys.readouterr().err


class TestPosencCommand:
    def test_periodic(self, tmp_path):
        table = np.arange(8, dtype=np.float32).reshape(4, 2)
        src = tmp_path / "t.npy"
        dst = tmp_path / "out.npy"
        write_array(table, src)
        code = main(["posenc", "--in", str(src), "--mode", "periodic", "--len", "6", "--out", str(dst)])
        assert code == 0
        out = read_array(dst)
        assert out.shape == (6, 2)
        assert out[4].tobytes() == table[0].tobytes()

    def test_interpolate(self, tmp_path):
        table = np.array([[0.0], [3.0]], dtype=np.float32)
        src = tmp_path / "t.npy"
        dst = tmp_path / "out.npy"
        write_array(table, src)
        code = main(["posenc", "--in", str(src), "--mode", "interpolate", "--len", "4", "--out", str(dst)])
        assert code == 0
        np.testing.assert_allclose(read_array(dst), [[0.0], [1.0], [2.0], [3.0]])

    def test_invalid_mode_is_usage_error(self, tmp_path):
        code = main(["posenc", "--in", "t.npy", "--mode", "banana", "--len", "4", "--out", "o.npy"])
        assert code == 2

    def test_bad_len_is_validation_error(self, tmp_path, capsys):
        table = np.ones((2, 2), dtype=np.float32)
        src = tmp_path / "t.npy"
        write_array(table, src)
        code = main(["posenc", "--in", str(src), "--mode", "periodic", "--len", "0", "--out", str(tmp_path / "o.npy")])
        assert code == 1


class TestInspectCommand:
    def test_summary(self, stream_files, capsys):
        feat, _, manifest = stream_files
        code = main(["inspect", "--in", str(feat), "--manifest", str(manifest)])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep == {
            "schema": 1, "frames": 400, "dim": 16,
            "t_first": 0.0, "t_last": 399.0,
            "duration": 400.0, "fps": 1.0,
        }

    def test_manifest_mismatch_fails(self, stream_files, tmp_path, capsys):
        feat, _, manifest = stream_files
        seq = FeatureSequence([0, 1], [[1.0, 0.0]] * 1 + [[0.0, 1.0]])
        other = tmp_path / "other.npy"
        write_feature_file(seq, other)
        code = main(["inspect", "--in", str(other), "--manifest", str(manifest)])
        assert code == 1
        assert "frame_count" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert main(["bogus"]) == 2

    def test_no_subcommand(self, capsys):
        assert main([]) == 2

    def test_synth_rejects_bad_spec(self, tmp_path, capsys):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"dim": 4, "segments": []}))
        code = main([
            "synth", "--spec", str(spec),
            "--out-features", str(tmp_path / "x.npy"),
            "--out-anchors", str(tmp_path / "a.jsonl"),
        ])
        assert code == 1
        assert "segment" in capsys.readouterr().err
