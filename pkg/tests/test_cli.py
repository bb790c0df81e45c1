import csv
import io
import json
import math

import pytest

from lnrbounds.analysis import symmetric_category_II
from lnrbounds.cli import main
from lnrbounds.settings_file import dump_settings, load_settings


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def sym_file(tmp_path):
    path = tmp_path / "sym.json"
    dump_settings(symmetric_category_II(math.radians(112.63)), path)
    return path


def test_bound_from_settings_file(capsys, sym_file):
    code, rec = run_json(capsys, "bound", "--settings-file", str(sym_file))
    assert code == 0
    assert rec["category"] == "II"
    assert rec["L"] == pytest.approx(0.9818457705, abs=1e-9)
    assert rec["bound"] == pytest.approx(1.6369614768, abs=1e-9)
    assert rec["extremal_angle_deg"] == pytest.approx(112.63, abs=1e-9)
    assert rec["degenerate"] is False


def test_violation_json_keys(capsys):
    code, rec = run_json(capsys, "violation", "--structured", "36.8699")
    assert code == 0
    assert {"category", "visibility", "L", "bound", "lhs", "S", "ratio"} <= set(rec)
    assert rec["S"] == pytest.approx(0.108185, abs=1e-6)
    assert rec["ratio"] == pytest.approx(rec["bound"] / rec["lhs"])


def test_violation_lower_visibility(capsys):
    code, rec = run_json(capsys, "violation", "--structured", "36.8699", "--visibility", "0.90")
    assert code == 0
    assert rec["S"] < 0


def test_bound_explicit_vectors(capsys):
    code, rec = run_json(capsys, "bound", "--a", "1,0,0;0,1,0;0,0,1", "--b", "1,0,0;0,1,0;0,0,1")
    assert code == 0
    assert rec["bound"] == pytest.approx(1.6150998, abs=1e-7)


def test_radians_flag(capsys):
    _, deg = run_json(capsys, "bound", "--symmetric", "100")
    _, rad = run_json(capsys, "bound", "--symmetric", repr(math.radians(100)), "--radians")
    assert deg["bound"] == pytest.approx(rad["bound"], abs=1e-12)


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--format", "csv", "--step", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["delta_deg", "lhs", "bound", "S"]
    assert len(rows) == 32
    assert float(rows[1][0]) == pytest.approx(90.0)
    assert float(rows[-1][0]) == pytest.approx(120.0)


def test_scan_json_matches_csv(capsys):
    _, out, _ = run(capsys, "scan", "--format", "csv", "--step", "2")
    csv_rows = list(csv.DictReader(io.StringIO(out)))
    _, rec = run_json(capsys, "scan", "--step", "2")
    assert len(csv_rows) == len(rec["rows"])
    for c, j in zip(csv_rows, rec["rows"]):
        for key in ("delta_deg", "lhs", "bound", "S"):
            assert float(c[key]) == pytest.approx(j[key], rel=1e-12, abs=1e-12)
    lo, hi = rec["violation_window_deg"]
    assert lo == pytest.approx(106.8, abs=0.3) and hi == pytest.approx(116.5, abs=0.3)


def test_scan_no_window(capsys):
    # an empty window is a result, not an error
    code, rec = run_json(capsys, "scan", "--visibility", "0.97")
    assert code == 0
    assert rec["max_S"] < 0
    assert rec["violation_window_deg"] is None


def test_env_default_format(capsys, monkeypatch):
    monkeypatch.setenv("LNRBOUNDS_FORMAT", "json")
    code, out, _ = run(capsys, "bound", "--symmetric", "100")
    assert code == 0
    assert "bound" in json.loads(out)


def test_optimize_emit_settings_round_trip(capsys, tmp_path):
    path = tmp_path / "opt.json"
    code, rec = run_json(capsys, "optimize", "--emit-settings", str(path))
    assert code == 0
    assert rec["tan_half_beta"] == pytest.approx(1 / 3, abs=1e-6)
    _, again = run_json(capsys, "violation", "--settings-file", str(path))
    assert again["S"] == pytest.approx(rec["S"], abs=1e-12)
    assert again["bound"] == pytest.approx(rec["bound"], abs=1e-12)
    assert load_settings(path).category == "I"


def test_bound_emit_settings(capsys, tmp_path, sym_file):
    path = tmp_path / "copy.json"
    run(capsys, "bound", "--settings-file", str(sym_file), "--emit-settings", str(path))
    assert load_settings(path) == load_settings(sym_file)


def test_oracle_random(capsys):
    code, rec = run_json(capsys, "oracle", "--random", "3")
    assert code == 0
    assert rec["all_agree"] is True
    assert rec["max_abs_error"] < 5e-3


def test_oracle_dependent_vectors_fail(capsys):
    code, _, err = run(capsys, "oracle", "--e", "1,0,0;0,1,0;1,1,0")
    assert code == 1
    assert err


def test_hvcheck_table(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("weight,A,B,B2\n0.5,1,1,-1\n0.25,-1,1,1\n0.25,1,-1,-1\n")
    code, rec = run_json(capsys, "hvcheck", "--table", str(path))
    assert code == 0
    assert rec["all_hold"] is True


def test_hvcheck_bad_outcome(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("weight,A,B,B2\n1.0,2,1,-1\n")
    code, _, _ = run(capsys, "hvcheck", "--table", str(path))
    assert code == 1


def test_robustness_json(capsys):
    code, rec = run_json(capsys, "robustness", "--structured", "36.8699", "--epsilon", "0.5", "--samples", "2000")
    assert code == 0
    assert rec["conclusive"] is True
    assert rec["conclusive_margin"] < rec["nominal_S"]


def test_reproduce_deterministic(capsys):
    code1, out1, _ = run(capsys, "reproduce", "--format", "json", "--oracle-triples", "10", "--seed", "7")
    code2, out2, _ = run(capsys, "reproduce", "--format", "json", "--oracle-triples", "10", "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["all_pass"] is True


def test_human_output(capsys):
    code, out, _ = run(capsys, "bound", "--symmetric", "112.63")
    assert code == 0
    assert "bound" in out and "{" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["bound", "--a", "1,0,0;0,1,0", "--b", "1,0,0;0,1,0;0,0,1"],
        ["bound"],
        ["bound", "--symmetric", "100", "--format", "xml"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_bad_settings_file_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"category": "III", "a": [], "b": []}')
    assert run(capsys, "bound", "--settings-file", str(path))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--a", "0,0,0;0,1,0;0,0,1", "--b", "1,0,0;0,1,0;0,0,1"],
        ["violation", "--structured", "36.87", "--visibility", "1.5"],
        ["scan", "--from", "100", "--to", "130"],
        ["bound", "--settings-file", "/nonexistent/settings.json"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err
