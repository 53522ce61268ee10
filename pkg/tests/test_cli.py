from __future__ import annotations

import json
import subprocess
import sys

import pytest

from gitstrata.cli import EXIT_ERROR, EXIT_OK, EXIT_PRECONDITION, EXIT_SIZE_CAP, main


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_run_to_stdout(capsys):
    code, out, _ = _run(["run", "--family", "A", "--rank", "2", "--rep", "irrep(3,0)"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == "gitstrata.result/1"
    assert doc["stats"]["p_s"] == 2


def test_run_from_spec_file_then_stats_and_render(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"family": "A", "rank": 3, "rep": "irrep(3,0,0)", "description": "cubic surfaces"}))
    out_path = tmp_path / "out.json"
    code, _, _ = _run(["run", str(spec), "-o", str(out_path), "--workers", "2"], capsys)
    assert code == EXIT_OK
    code, out, _ = _run(["stats", str(out_path), "--format", "csv"], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[1].endswith("20,8,15,3,3,3")
    code, out, _ = _run(["render", str(out_path)], capsys)
    assert code == EXIT_OK
    assert "X1^3" in out


def test_precondition_exit_code(capsys):
    code, _, err = _run(["run", "--family", "A", "--rank", "2", "--rep", "irrep(0,0)"], capsys)
    assert code == EXIT_PRECONDITION
    assert json.loads(err)["error"] == "precondition"


def test_size_cap_exit_code(capsys):
    code, _, err = _run(["run", "--family", "A", "--rank", "2", "--rep", "irrep(6,0)", "--max-characters", "5"], capsys)
    assert code == EXIT_SIZE_CAP
    code, _, _ = _run(["verify", "--family", "A", "--rank", "2", "--rep", "irrep(8,0)"], capsys)
    assert code == EXIT_SIZE_CAP


@pytest.mark.parametrize(
    "argv, error",
    [
        (["run", "--family", "A", "--rank", "2", "--rep", "irrep(3,0"], "parse"),
        (["run", "--family", "A", "--rank", "2"], "schema"),
        (["run", "--family", "A", "--rank", "2", "--rep", "irrep(1,0,0)"], "domain"),
        (["run", "--family", "D", "--rank", "1", "--rep", "irrep(1)"], "domain"),
        (["stats", "/nonexistent/file.json"], "io"),
    ],
)
def test_error_codes(argv, error, capsys):
    code, _, err = _run(argv, capsys)
    assert code == EXIT_ERROR
    assert json.loads(err)["error"] == error


def test_unknown_result_version(tmp_path, capsys):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"schema": "gitstrata.result/2"}))
    code, _, err = _run(["render", str(p)], capsys)
    assert code == EXIT_ERROR
    assert json.loads(err)["error"] == "schema"


def test_verify(capsys):
    code, out, _ = _run(["verify", "--family", "B", "--rank", "2", "--rep", "irrep(3,0)", "--trials", "200"], capsys)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["nonstable_matches"] and report["unstable_matches"]
    assert report["random_disagreements"] == 0


def test_resume(tmp_path, capsys):
    ck = str(tmp_path / "job")
    out1 = tmp_path / "a.json"
    code, _, _ = _run(["run", "--family", "A", "--rank", "3", "--rep", "irrep(4,0,0)", "--checkpoint", ck,
                       "--checkpoint-every", "40", "-o", str(out1)], capsys)
    assert code == EXIT_OK
    first = json.loads(out1.read_text())
    code, _, _ = _run(["resume", ck], capsys)
    assert code == EXIT_OK
    second = json.loads(out1.read_text())
    first["stats"].pop("seconds")
    second["stats"].pop("seconds")
    assert first == second
    code, _, err = _run(["resume", str(tmp_path / "missing")], capsys)
    assert code == EXIT_ERROR


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gitstrata", "run", "--family", "A", "--rank", "1", "--rep", "irrep(2)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["stats"]["p_ps"] == 1
