import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from xibessel.cli import REPORT_SCHEMA, SUITE_SCHEMA, main, parse_grid, parse_scalar
from xibessel.verify import CHECK_IDS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def suite_json():
    code, text, _ = run("verify", "all", "--format", "json", "--no-timing")
    return code, text


def test_eval_xi():
    code, out, _ = run("eval", "Xi", "--y", "0")
    assert code == 0
    assert abs(float(out) - 0.4971208) < 1e-7


@pytest.mark.parametrize("argv,expected", [
    (["eval", "gamma", "--z", "5"], 24.0),
    (["eval", "j0", "--x", "1"], 0.7651976866),
    (["eval", "i0", "--x", "1"], 1.2660658778),
    (["eval", "1f1", "--a", "0.5", "--w", "-1"], 0.6450353),
    (["eval", "psi", "--y", "1"], 0.3863186),
    (["eval", "h1", "--y", "1", "--r", "0", "--t", "1"], -0.4999083),
    (["eval", "u", "--r", "1", "--t", "1"], 0.285569062),
    (["eval", "xi", "--s", "0.5"], 0.4971208),
])
def test_eval_functions(argv, expected):
    code, out, _ = run(*argv)
    assert code == 0
    assert abs(float(out) - expected) < 1e-6


def test_eval_complex_and_json():
    code, out, _ = run("eval", "zeta", "--s", "2+1i")
    assert code == 0 and out.strip().endswith("i")
    code, out, _ = run("eval", "zeta", "--s", "2+1i", "--format", "json")
    value = json.loads(out)["value"]
    assert set(value) == {"re", "im"}
    code, out, _ = run("eval", "muntz", "--y", "0.5", "--r", "0.5i", "--format", "json")
    assert code == 0 and isinstance(json.loads(out)["value"], float)


def test_eval_missing_param_is_usage_error():
    code, out, err = run("eval", "Xi")
    assert code == 2 and out == "" and "--y" in err


def test_eval_pole_is_usage_error():
    code, _, err = run("eval", "gamma", "--z", "-2")
    assert code == 2 and "pole" in err.lower()


def test_verify_single_json():
    code, out, _ = run("verify", "bvp_i", "--t", "1.0", "--tol", "1e-10", "--format", "json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["passed"] is True
    assert "calibration" not in report
    assert report["tol"] == 1e-10


def test_verify_calibrate_has_calibration():
    code, out, _ = run("verify", "bvp_i", "--mode", "calibrate", "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert set(report["calibration"]) == {"constant", "spread"}


def test_verify_unknown_check():
    code, out, err = run("verify", "nosuchcheck")
    assert code == 2 and out == ""
    assert "verify <check_id|all>" in err


def test_verify_bad_flag_value():
    assert run("verify", "bvp_i", "--format", "xml")[0] == 2
    assert run("verify", "bvp_i", "--mode", "sloppy")[0] == 2
    assert run("verify", "bvp_i", "--grid", "t")[0] == 2


def test_verify_failing_exact_check_exits_1():
    code, out, _ = run("verify", "bvp_i", "--tol", "1e-30", "--format", "csv")
    assert code == 1
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1][8] == "false"


def test_verify_calibrate_failure_does_not_change_exit():
    code, _, _ = run("verify", "bvp_ii", "--mode", "calibrate", "--tol", "1e-30")
    assert code == 0


def test_verify_grid_and_rt_flags():
    code, out, _ = run("verify", "residue_3_5", "--r", "0.5,0.5i", "--t", "1", "--grid", "y=1", "--format", "json")
    assert code == 0
    params = json.loads(out)["params"]
    assert params["rt"] == [[0.5, 1.0], [{"re": 0.0, "im": 0.5}, 1.0]]
    assert len(params["points"]) == 2


def test_json_round_trip_precision():
    code, out, _ = run("verify", "bvp_i", "--format", "json")
    from xibessel.verify import run_check
    rep = run_check("bvp_i")
    back = json.loads(out)
    assert back["lhs"] == rep.lhs and back["rhs"] == rep.rhs and back["rel_diff"] == rep.rel_diff


def test_csv_complex_rendering():
    code, out, _ = run("verify", "mellin_3_3", "--grid", "s=0.5+0.3i;r=1;t=1;v=0", "--format", "csv")
    row = list(csv.reader(io.StringIO(out)))[1]
    assert row[2].endswith("i") and ("+" in row[2][1:] or "-" in row[2][1:])


def test_human_table():
    code, out, _ = run("verify", "residue_3_5")
    assert code == 0
    assert out.splitlines()[0].startswith("check")
    assert "errata:" in out and "4t" in out


def test_out_is_atomic(tmp_path):
    target = tmp_path / "report.json"
    target.write_text("old")
    code, out, _ = run("verify", "bvp_i", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["check_id"] == "bvp_i"
    assert os.listdir(tmp_path) == ["report.json"]


def test_out_write_failure_exits_3(tmp_path):
    code, _, err = run("verify", "bvp_i", "--out", str(tmp_path / "missing" / "r.json"))
    assert code == 3 and "write failed" in err


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# suite settings\ntol = 1e-30\nformat = json\n")
    code, out, _ = run("verify", "bvp_i", "--config", str(cfg))
    assert code == 1 and json.loads(out)["tol"] == 1e-30
    code, out, _ = run("verify", "bvp_i", "--config", str(cfg), "--tol", "1e-9")
    assert code == 0 and json.loads(out)["tol"] == 1e-9
    cfg.write_text("colour = blue\n")
    assert run("verify", "bvp_i", "--config", str(cfg))[0] == 2
    assert run("verify", "bvp_i", "--config", str(tmp_path / "nope.cfg"))[0] == 2


def test_parse_helpers():
    assert parse_grid("x=0,0.2;r=0.5i") == {"x": [0.0, 0.2], "r": [0.5j]}
    assert parse_scalar("pi") == pytest.approx(3.141592653589793)
    assert parse_scalar("1-2i") == 1 - 2j


def test_scan_xi_zeros():
    code, out, _ = run("scan", "xi-zeros", "--y-max", "26")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["index", "y_lower", "y_upper", "y_mid"]
    mids = [float(r["y_mid"]) for r in rows]
    for expected, got in zip((14.1347, 21.0220, 25.0109), mids):
        assert abs(got - expected) < 1e-4
    assert run("scan", "primes", "--y-max", "5")[0] == 2


def test_heat_command():
    code, out, _ = run("heat", "--r", "1", "--t", "1", "--kappa", "1", "--residual", "--format", "json")
    row = json.loads(out)
    assert code == 0 and abs(row["u"] - 0.285569062) < 1e-9 and row["residual"] < 1e-6
    assert run("heat", "--r", "1", "--t", "0")[0] == 2


def test_full_suite_json(suite_json):
    code, text = suite_json
    data = json.loads(text)
    jsonschema.validate(data, SUITE_SCHEMA)
    assert [r["check_id"] for r in data["reports"]] == list(CHECK_IDS)
    exact_ok = all(r["passed"] for r in data["reports"] if r["params"]["mode"] == "exact")
    assert code == (0 if exact_ok else 1)
    assert any(e["check_id"] == "residue_3_5" for e in data["errata"])


def test_full_suite_deterministic(suite_json):
    _, first = suite_json
    _, second, _ = run("verify", "all", "--format", "json", "--no-timing")
    assert first == second


def test_full_suite_csv_line_count():
    code, out, _ = run("verify", "all", "--format", "csv", "--no-timing", "--workers", "2")
    lines = out.splitlines()
    assert len(lines) == 20 and lines[0].startswith("check_id,params,lhs")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xibessel", "eval", "Xi", "--y", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("0.49712")
    proc = subprocess.run([sys.executable, "-m", "xibessel", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
