import json

import numpy as np
import pytest
from click.testing import CliRunner

from bitewatch import MotionTrace, Participant
from bitewatch.cli import cli, parse_axis
from bitewatch.datafiles import read_motion_csv, write_json, write_motion_csv
from bitewatch.pipeline import write_synth_dataset
from bitewatch.synth import CohortProfile, cohort


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def dataset_manifest(tmp_path):
    profiles = [
        CohortProfile(Participant("p1", "female", 40, "Caucasian", "right"),
                      spb_mean=14.0, spb_std=0.0, n_bites=6, menu=("cheese pizza",)),
    ]
    return write_synth_dataset(tmp_path / "ds", cohort(profiles, seed=5), seed=5)


class TestParseAxis:
    def test_comma_list(self):
        assert parse_axis("6,8") == [6.0, 8.0]
        assert parse_axis("10") == [10.0]

    def test_inclusive_range(self):
        assert parse_axis("8:12:1") == [8.0, 9.0, 10.0, 11.0, 12.0]
        assert parse_axis("1:2:0.5") == [1.0, 1.5, 2.0]


class TestCommands:
    def test_usage_error_exit_code_2(self, runner):
        result = runner.invoke(cli, ["report"])  # missing required args
        assert result.exit_code == 2

    def test_validate_clean_dataset(self, runner, dataset_manifest):
        result = runner.invoke(cli, ["validate", str(dataset_manifest)])
        assert result.exit_code == 0
        assert "0 anomalies" in result.output

    def test_validate_gappy_trace_exits_1(self, runner, tmp_path, dataset_manifest):
        csv = dataset_manifest.parent / "motion" / "p1-c1.csv"
        trace = read_motion_csv(csv)
        t = trace.t.copy()
        t[40:] += 2.0  # tear a hole in the clock
        write_motion_csv(csv, MotionTrace(t, trace.gyro, trace.accel))
        result = runner.invoke(cli, ["validate", str(dataset_manifest)])
        assert result.exit_code == 1
        assert "gap" in result.output

    def test_smooth_single_file(self, runner, tmp_path):
        n = 40
        rng = np.random.default_rng(0)
        write_motion_csv(tmp_path / "in.csv",
                         MotionTrace(np.arange(n) / 15.0, rng.normal(0, 20, (n, 3)),
                                     np.zeros((n, 3))))
        result = runner.invoke(cli, [
            "smooth", "--motion", str(tmp_path / "in.csv"), "--out", str(tmp_path / "out.csv"),
        ])
        assert result.exit_code == 0
        out = read_motion_csv(tmp_path / "out.csv")
        assert len(out) == n

    def test_detect_manifest_writes_jsonl(self, runner, dataset_manifest, tmp_path):
        out = tmp_path / "artifacts"
        result = runner.invoke(cli, ["detect", str(dataset_manifest), "--out", str(out)])
        assert result.exit_code == 0
        files = list((out / "detections").glob("*.jsonl"))
        assert len(files) == 1
        lines = [json.loads(l) for l in files[0].read_text().splitlines()]
        assert len(lines) == 6

    def test_detect_param_overrides(self, runner, dataset_manifest, tmp_path):
        csv = dataset_manifest.parent / "motion" / "p1-c1.csv"
        out = tmp_path / "det.jsonl"
        result = runner.invoke(cli, [
            "detect", "--motion", str(csv), "--out", str(out),
            "--t1", "400", "--t2", "400",
        ])
        assert result.exit_code == 0
        assert out.read_text() == ""  # thresholds unreachable

    def test_evaluate_and_report(self, runner, dataset_manifest, tmp_path):
        out = tmp_path / "artifacts"
        result = runner.invoke(cli, ["evaluate", str(dataset_manifest), "--out", str(out)])
        assert result.exit_code == 0
        assert "sensitivity=1.000" in result.output
        result = runner.invoke(cli, ["report", str(dataset_manifest), "--by", "gender"])
        assert result.exit_code == 0
        header, row = result.output.strip().splitlines()
        assert header.split("\t") == ["key", "n_bites", "n_detected", "sensitivity_pct", "spb"]
        assert row.split("\t") == ["female", "6", "6", "100", "14"]

    def test_error_report_command(self, runner, dataset_manifest):
        result = runner.invoke(cli, ["error-report", str(dataset_manifest)])
        assert result.exit_code == 0
        assert "missed_bite\t0\t0.0%" in result.output

    def test_sweep_grid(self, runner, dataset_manifest):
        result = runner.invoke(cli, [
            "sweep", str(dataset_manifest), "--t4", "6,8", "--t1", "9:11:1",
        ])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert len(lines) == 1 + 3 * 2  # header + |t1| * |t4|
        assert lines[0].startswith("t1\tt2\tt3\tt4")

    def test_synth_render_and_evaluate_roundtrip(self, runner, tmp_path):
        script = {
            "course_id": "demo",
            "duration_s": 60.0,
            "bites": [
                {"t": 10.0, "template": {"pos_amp": 40, "neg_amp": 40,
                                         "lobe_dur_s": 0.5, "lobe_gap_s": 2.5}},
                {"t": 30.0},
                {"t": 45.0},
            ],
        }
        write_json(tmp_path / "script.json", script)
        result = runner.invoke(cli, [
            "synth", "render", "--script", str(tmp_path / "script.json"),
            "--seed", "7", "--out", str(tmp_path / "ds"),
        ])
        assert result.exit_code == 0
        manifest = tmp_path / "ds" / "manifest.json"
        assert manifest.exists()
        result = runner.invoke(cli, [
            "evaluate", str(manifest), "--out", str(tmp_path / "out"),
        ])
        assert result.exit_code == 0
        assert "T=3 F=0 U=0" in result.output

    def test_synth_cohort_command(self, runner, tmp_path):
        profiles = {
            "dataset_id": "two",
            "profiles": [
                {
                    "participant": {"id": "p1", "gender": "female", "age": 40,
                                    "ethnicity": "Caucasian", "dominant_hand": "right"},
                    "spb_mean": 15.0, "n_bites": 5,
                },
                {
                    "participant": {"id": "p2", "gender": "male", "age": 20,
                                    "ethnicity": "Hispanic", "dominant_hand": "left"},
                    "spb_mean": 12.0, "n_bites": 5, "n_courses": 2,
                },
            ],
        }
        write_json(tmp_path / "profiles.json", profiles)
        result = runner.invoke(cli, [
            "synth", "cohort", "--profiles", str(tmp_path / "profiles.json"),
            "--out", str(tmp_path / "ds"),
        ])
        assert result.exit_code == 0
        assert "3 courses" in result.output

    def test_serve_check(self, runner, dataset_manifest, tmp_path):
        result = runner.invoke(cli, [
            "serve", str(dataset_manifest), "--check",
            "--state-dir", str(tmp_path / "state"),
        ])
        assert result.exit_code == 0
        assert "routes" in result.output

    def test_data_error_exit_code_1(self, runner, tmp_path, dataset_manifest):
        (dataset_manifest.parent / "motion" / "p1-c1.csv").unlink()
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "bitewatch.cli", "validate", str(dataset_manifest)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 1
        assert "missing file" in proc.stderr


class TestEnvOutputRoot:
    def test_bitewatch_out_env(self, runner, dataset_manifest, tmp_path, monkeypatch):
        monkeypatch.setenv("BITEWATCH_OUT", str(tmp_path / "envout"))
        result = runner.invoke(cli, ["evaluate", str(dataset_manifest)])
        assert result.exit_code == 0
        assert (tmp_path / "envout" / "reports" / "summary.json").exists()
