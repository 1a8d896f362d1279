"""
Integration tests for the gazeforge command line.

Each test drives ``cli.main`` with an argument list, parses the ``--json``
summary from stdout and checks the files the command wrote.
"""

import hashlib
import json

import numpy as np
import pandas as pd
import pytest

from cli import main
from data.feature_dump import write_feature_dump
from data.manifest import read_jsonl, write_jsonl
from data.synthetic import SyntheticDataBuilder
from losses import FeatureMeta

pytestmark = pytest.mark.integration


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    lines = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
    return code, json.loads(lines[-1])


def tree_digest(root):
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class TestConfigCheck:
    """Test cases for the config-check command."""

    def test_defaults(self, capsys):
        """Test the shipped defaults give 143 bins and 91,520 draws per dataset."""
        code, summary = run_json(capsys, "config-check")
        assert code == 0
        assert summary["status"] == "ok"
        assert summary["schema_version"] == 1
        result = summary["result"]
        assert result["bins"] == 143
        assert result["pitch_bins"] == 11
        assert result["yaw_bins"] == 13
        assert result["plan_size_per_dataset"] == {"X": 91520, "N": 91520, "C": 91520}

    def test_unknown_key_is_schema_error(self, capsys, tmp_path):
        """Test an unknown configuration key exits with code 4."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"schema_version": 1, "sampler": {"quota": 640, "qouta": 1}}))
        code, summary = run_json(capsys, "config-check", "--config", str(path))
        assert code == 4
        assert summary["status"] == "error"
        assert summary["error"]["code"] == "CONFIG_SCHEMA_ERROR"

    def test_missing_config_file(self, capsys, tmp_path):
        """Test a missing configuration file exits with code 3."""
        code, _ = run_json(capsys, "config-check", "--config", str(tmp_path / "nope.json"))
        assert code == 3

    def test_env_config_is_used(self, capsys, env_config):
        """Test GAZEFORGE_CONFIG is read when --config is absent."""
        env_config.write_text(json.dumps({"schema_version": 1, "sampler": {"quota": 10}}))
        code, summary = run_json(capsys, "config-check")
        assert code == 0
        assert summary["result"]["quota"] == 10

    def test_dump_roundtrips(self, capsys, tmp_path):
        """Test a dumped configuration is accepted again unchanged."""
        dumped = tmp_path / "resolved.json"
        assert run_json(capsys, "config-check", "--dump", str(dumped))[0] == 0
        code, summary = run_json(capsys, "config-check", "--config", str(dumped))
        assert code == 0
        assert summary["result"]["bins"] == 143

    def test_human_output(self, capsys):
        """Test the plain summary names the bin count."""
        assert main(["config-check"]) == 0
        assert "143 bins" in capsys.readouterr().out


class TestAugmentCommand:
    """Test cases for the augment command."""

    def test_missing_manifest_is_usage_error(self, capsys, tmp_path):
        """Test augment without a manifest exits with code 2."""
        code, summary = run_json(capsys, "augment", "--out", str(tmp_path / "out"))
        assert code == 2
        assert summary["error"]["code"] == "USAGE_ERROR"

    def test_writes_views(self, capsys, synthetic_manifest, tmp_path):
        """Test four views and one metadata line per view are written."""
        code, summary = run_json(
            capsys, "augment", "--manifest", str(synthetic_manifest), "--out", str(tmp_path / "views")
        )
        assert code == 0
        assert summary["result"]["samples"] == 12
        assert summary["result"]["views"] == 48
        assert len(read_jsonl(summary["result"]["metadata"])) == 48

    @pytest.mark.slow
    def test_worker_count_does_not_change_output(self, capsys, tmp_path):
        """Test 1 and 8 workers write byte-identical trees for a 50-sample manifest."""
        manifest = SyntheticDataBuilder(tmp_path / "src", 32, 32, seed=5).build_manifest(50)
        digests = []
        for workers in (1, 8):
            out = tmp_path / f"views_{workers}"
            code, _ = run_json(
                capsys,
                "augment",
                "--manifest", str(manifest),
                "--out", str(out),
                "--seed", "11",
                "--workers", str(workers),
            )
            assert code == 0
            digests.append(tree_digest(out))
        assert len(digests[0]) == 50 * 4 + 1
        assert digests[0] == digests[1]


class TestAnnotateCommand:
    """Test cases for the annotate command."""

    def test_writes_labels(self, capsys, tmp_path):
        """Test one label line per sample."""
        manifest = SyntheticDataBuilder(tmp_path / "src", 120, 120, seed=2).build_manifest(2)
        code, summary = run_json(
            capsys, "annotate", "--manifest", str(manifest), "--out", str(tmp_path / "labels")
        )
        assert code == 0
        assert summary["result"]["samples"] == 2
        assert len(read_jsonl(tmp_path / "labels" / "labels.jsonl")) == 2


class TestPlanEpochCommand:
    """Test cases for the plan-epoch command."""

    def test_empty_cells_fail_by_default(self, capsys, synthetic_manifest):
        """Test a sparse manifest under the error policy exits with code 6."""
        code, summary = run_json(capsys, "plan-epoch", "--manifest", str(synthetic_manifest))
        assert code == 6
        assert summary["status"] == "error"

    def test_skip_policy_writes_plan(self, capsys, synthetic_manifest, tmp_path):
        """Test the skip policy plans quota draws per occupied cell."""
        config = tmp_path / "skip.json"
        config.write_text(
            json.dumps({"schema_version": 1, "sampler": {"quota": 3, "empty_cell_policy": "skip"}})
        )
        code, summary = run_json(
            capsys,
            "plan-epoch",
            "--config", str(config),
            "--manifest", str(synthetic_manifest),
            "--out", str(tmp_path / "plans"),
            "--histogram",
        )
        assert code == 0
        result = summary["result"]
        rows = read_jsonl(result["plan"])
        assert len(rows) == result["total_draws"]
        assert result["total_draws"] % 3 == 0
        assert sum(result["per_dataset"].values()) == result["total_draws"]
        assert (tmp_path / "plans" / "subjects_epoch0.json").exists()

    def test_same_seed_same_plan(self, capsys, synthetic_manifest, tmp_path):
        """Test two runs with the same seed write identical plans."""
        config = tmp_path / "skip.json"
        config.write_text(
            json.dumps({"schema_version": 1, "sampler": {"quota": 5, "empty_cell_policy": "skip"}})
        )
        texts = []
        for name in ("a", "b"):
            out = tmp_path / name
            code, _ = run_json(
                capsys,
                "plan-epoch",
                "--config", str(config),
                "--manifest", str(synthetic_manifest),
                "--out", str(out),
                "--seed", "7",
            )
            assert code == 0
            texts.append((out / "plan_epoch0.jsonl").read_text())
        assert texts[0] == texts[1]

    def test_json_summary_is_reproducible(self, capsys, synthetic_manifest, tmp_path):
        """Test reruns with the same seed print byte-identical JSON summaries."""
        config = tmp_path / "skip.json"
        config.write_text(
            json.dumps({"schema_version": 1, "sampler": {"quota": 5, "empty_cell_policy": "skip"}})
        )
        argv = [
            "plan-epoch",
            "--config", str(config),
            "--manifest", str(synthetic_manifest),
            "--out", str(tmp_path / "plans"),
            "--seed", "7",
            "--json",
        ]
        outputs = []
        for _ in range(2):
            assert main(argv) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        assert "timing" not in json.loads(outputs[0].strip().splitlines()[-1])


class TestLossEvalCommand:
    """Test cases for the loss-eval command."""

    def test_reports_all_terms(self, capsys, tmp_path):
        """Test every contrastive term is reported with its weighted value."""
        rng = np.random.default_rng(0)
        meta = [
            FeatureMeta(
                sample_id=f"s{i}",
                dataset_id=("X", "N", "C")[i % 3],
                glasses=i % 2 == 0,
                mask=i % 4 == 0,
                pitch=float(rng.uniform(-30, 14)),
                yaw=float(rng.uniform(-26, 26)),
            )
            for i in range(12)
        ]
        path, _ = write_feature_dump(tmp_path / "batch.bin", rng.normal(size=(12, 8)), meta)
        code, summary = run_json(capsys, "loss-eval", "--features", str(path))
        assert code == 0
        result = summary["result"]
        assert set(result["terms"]) == {"dataset", "pitch", "glasses", "mask"}
        assert result["weighted_total"] == pytest.approx(sum(result["weighted"].values()))

    def test_unknown_term(self, capsys, tmp_path):
        """Test an unknown term name is a usage error."""
        code, _ = run_json(
            capsys, "loss-eval", "--features", str(tmp_path / "x.bin"), "--terms", "yaw"
        )
        assert code == 2

    def test_missing_dump(self, capsys, tmp_path):
        """Test a missing feature dump exits with code 3."""
        code, _ = run_json(capsys, "loss-eval", "--features", str(tmp_path / "x.bin"))
        assert code == 3


class TestCalibrateCommand:
    """Test cases for the calibrate command."""

    def test_mpii_reduces_error(self, capsys, screen_predictions_csv, tmp_path):
        """Test 3-point calibration removes most of a constant offset."""
        code, summary = run_json(
            capsys,
            "calibrate",
            "--pairs", str(screen_predictions_csv),
            "--points", "3",
            "--out", str(tmp_path / "calib"),
        )
        assert code == 0
        result = summary["result"]
        assert result["baseline"]["l2"] > 5.0
        assert result["calibrated"]["l2"] < 2.0
        assert (tmp_path / "calib" / "calibration.json").exists()

    def test_realgaze_writes_corrected(self, capsys, screen_predictions_csv, tmp_path):
        """Test 5-point session calibration writes corrected predictions."""
        code, summary = run_json(
            capsys,
            "calibrate",
            "--pairs", str(screen_predictions_csv),
            "--points", "5",
            "--protocol", "realgaze",
            "--out", str(tmp_path / "calib"),
        )
        assert code == 0
        corrected = pd.read_csv(tmp_path / "calib" / "calibrated_predictions.csv")
        assert len(corrected) > 0
        assert len(summary["result"]["models"]) == 4 * 9

    def test_realgaze_rejects_three_points(self, capsys, screen_predictions_csv):
        """Test realgaze only accepts 1 or 5 points."""
        code, _ = run_json(
            capsys,
            "calibrate",
            "--pairs", str(screen_predictions_csv),
            "--points", "3",
            "--protocol", "realgaze",
        )
        assert code == 2


class TestEvaluateCommand:
    """Test cases for the evaluate command."""

    def test_screen_report(self, capsys, screen_predictions_csv, tmp_path):
        """Test every session group is reported with the right counts."""
        code, summary = run_json(
            capsys,
            "evaluate",
            "--pred", str(screen_predictions_csv),
            "--mode", "screen",
            "--out", str(tmp_path / "eval"),
        )
        assert code == 0
        rows = {r["group"]: r for r in summary["result"]["rows"]}
        assert list(rows) == ["Overall", "Ideal", "Side-Lit", "Glasses", "Masks"]
        assert rows["Overall"]["count"] == 4 * 9 * 20
        assert rows["Ideal"]["count"] == 4 * 2 * 20
        assert rows["Overall"]["d_x"] == pytest.approx(5.0, abs=0.2)
        assert (tmp_path / "eval" / "report_screen.csv").exists()
        assert (tmp_path / "eval" / "report_screen.txt").exists()

    def test_missing_columns(self, capsys, tmp_path):
        """Test a file without the angular columns exits with code 5."""
        path = tmp_path / "bad.csv"
        pd.DataFrame({"sample_id": ["a"], "pred_pitch": [1.0]}).to_csv(path, index=False)
        code, summary = run_json(capsys, "evaluate", "--pred", str(path), "--mode", "angular")
        assert code == 5
        assert summary["error"]["code"] == "DATA_VALIDATION_ERROR"

    def test_missing_file(self, capsys, tmp_path):
        """Test a missing prediction file exits with code 3."""
        code, _ = run_json(
            capsys, "evaluate", "--pred", str(tmp_path / "nope.csv"), "--mode", "screen"
        )
        assert code == 3

    def test_zerogaze(self, capsys, tmp_path):
        """Test per-view statistics recover an injected pitch bias."""
        rng = np.random.default_rng(1)
        rows = []
        for t in range(200):
            for view, bias in (("clean", 0.0), ("glasses", -3.0), ("mask", 0.0)):
                rows.append(
                    {
                        "sample_id": f"t{t}_{view}",
                        "pred_pitch": bias + rng.normal(0, 1),
                        "pred_yaw": rng.normal(0, 1),
                        "view": view,
                        "triplet_id": f"t{t}",
                    }
                )
        path = tmp_path / "zg.csv"
        pd.DataFrame(rows).to_csv(path, index=False)
        code, summary = run_json(
            capsys,
            "evaluate",
            "--pred", str(path),
            "--mode", "zerogaze",
            "--pose-filter",
            "--out", str(tmp_path / "eval"),
        )
        assert code == 0
        views = summary["result"]["views"]
        assert set(views) == {"clean", "glasses", "mask"}
        assert views["glasses"]["mean_pitch"] == pytest.approx(-3.0, abs=0.3)
        assert summary["result"]["pose_filter"]["triplets_kept"] == 200
        assert (tmp_path / "eval" / "zerogaze.json").exists()


class TestFailureHandling:
    """Test cases for exit codes on interrupted and unexpected failures."""

    def test_keyboard_interrupt(self, mocker, capsys):
        """Test an interrupt exits with code 1."""
        mocker.patch("cli.load_run_config", side_effect=KeyboardInterrupt)
        assert main(["config-check"]) == 1
        assert "interrupted" in capsys.readouterr().err

    def test_unexpected_error(self, mocker, capsys):
        """Test an unexpected exception is reported with code 1."""
        mocker.patch("cli.load_run_config", side_effect=RuntimeError("disk on fire"))
        code, summary = run_json(capsys, "config-check")
        assert code == 1
        assert summary["error"]["code"] == "UNEXPECTED"
        assert summary["error"]["message"] == "disk on fire"

    def test_no_command_prints_help(self, capsys):
        """Test running without a subcommand prints usage and exits 0."""
        assert main([]) == 0
        assert "usage" in capsys.readouterr().out.lower()


class TestDensePlan:
    """Test cases for planning over a manifest that fills every cell."""

    @pytest.fixture
    def dense_manifest(self, tmp_path):
        rows = [
            {
                "sample_id": f"{dataset}_{i}_{j}",
                "dataset_id": dataset,
                "subject_id": f"p{(i + j) % 3}",
                "pitch": -28.0 + 4.0 * i,
                "yaw": -24.0 + 4.0 * j,
            }
            for dataset in ("X", "N", "C")
            for i in range(11)
            for j in range(13)
        ]
        path, _ = write_jsonl(tmp_path / "dense.jsonl", rows)
        return path

    @pytest.mark.slow
    def test_default_quota(self, capsys, dense_manifest):
        """Test the default quota plans 91,520 draws per dataset."""
        code, summary = run_json(capsys, "plan-epoch", "--manifest", str(dense_manifest))
        assert code == 0
        result = summary["result"]
        assert result["per_dataset"] == {"C": 91520, "N": 91520, "X": 91520}
        assert result["plan_size_per_dataset"] == {"X": 91520, "N": 91520, "C": 91520}
        assert result["total_draws"] == 3 * 91520
        assert result["skipped_cells"] == []
