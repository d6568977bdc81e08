import subprocess
import sys

import pytest

from mslab.cli import main, read_config


def mslab(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "mslab.cli", *args], capture_output=True, text=True, cwd=cwd)


def test_list_is_stable():
    a, b = mslab("list"), mslab("list")
    assert a.returncode == 0 and a.stdout == b.stdout
    assert "quarter-shift" in a.stdout


def test_unknown_experiment_is_usage_error():
    res = mslab("no-such-experiment")
    assert res.returncode == 2
    assert "invalid choice" in res.stderr


def test_bad_parameter_is_usage_error(tmp_path):
    assert mslab("carleson-delta", "--n", "x", "--out", str(tmp_path)).returncode == 2
    assert mslab("carleson-delta", "--format", "xml", "--out", str(tmp_path)).returncode == 2


def test_run_writes_reports_and_passes(tmp_path):
    res = mslab("carleson-delta", "--n", "12", "--out", str(tmp_path), "--format", "csv,json,svg")
    assert res.returncode == 0, res.stderr
    assert res.stdout.startswith("PASS carleson-delta: separated")
    assert "wall time" in res.stderr and "wall time" not in res.stdout
    assert {p.name for p in tmp_path.iterdir()} == {
        "carleson-delta.json", "carleson-delta__delta.csv", "carleson-delta__delta.svg"
    }


def test_failed_verdict_exits_one(tmp_path):
    res = mslab("carleson-delta", "--sequence", "radial", "--n", "40", "--out", str(tmp_path))
    assert res.returncode == 1
    assert "FAIL carleson-delta: separated" in res.stdout
    assert "failed verdicts: separated" in res.stderr


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nsequence = radial\nn = 30\nseed = 5\n")
    assert read_config(cfg) == {"sequence": "radial", "n": "30", "seed": "5"}
    code = main(["carleson-delta", "--config", str(cfg), "--sequence", "exponential", "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "carleson-delta.json").read_text()
    assert '"sequence": "exponential"' in text and '"n": 30' in text and '"seed": 5' in text


def test_reruns_are_byte_identical(tmp_path):
    for d in ("a", "b"):
        res = mslab("pp-check", "--a", "0,0.5", "--seed", "11", "--out", str(tmp_path / d), "--format", "csv,json,svg")
        assert res.returncode == 0, res.stderr
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
