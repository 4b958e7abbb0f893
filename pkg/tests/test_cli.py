from __future__ import annotations

import json
import subprocess
import sys

import pytest

from selbergsums.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, float_list, grid, int_range, main, parse_shift


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gsum_two_rows(capsys):
    code, out, _ = run(capsys, "thm1", "--u", "1e-3,1e-4", "--v", "0", "--T", "600", "--format", "csv")
    assert code == EXIT_PASS
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(lines) == 3 and out.startswith("# schema=1")


def test_gsum_prime_term_rows(capsys):
    code, out, _ = run(capsys, "gsum", "--u", "1e-3", "--v", "log:2", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_PASS and doc["rows"][0]["comparison"] == "prime_minus"
    code, out, _ = run(capsys, "thm1", "--u", "1e-3", "--v=-log:2", "--format", "json")
    assert json.loads(out)["rows"][0]["comparison"] == "prime_plus"


def test_gsum_band_failure_exit_code(capsys):
    code, _, _ = run(capsys, "gsum", "--u", "1e-3", "--v", "0", "--band", "0.1")
    assert code == EXIT_FAIL


def test_missing_zero_file_names_path(capsys, tmp_path):
    missing = tmp_path / "absent_zeros.txt"
    code, _, err = run(capsys, "gsum", "--u", "0.01", "--zeros", str(missing))
    assert code == EXIT_INPUT and str(missing) in err


def test_missing_descriptor_names_path(capsys, tmp_path):
    code, _, err = run(capsys, "count", "--descriptor", str(tmp_path / "x.desc"))
    assert code == EXIT_INPUT and "x.desc" in err


def test_custom_descriptor_and_zero_file(capsys, tmp_path):
    (tmp_path / "z.desc").write_text("Q = 0.5641895835477563\nm_F = 1\ngamma = 0.5,0,0\n")
    (tmp_path / "z.txt").write_text("14.134725141734693\n21.022039638771555\n25.010857580145688\n")
    code, out, _ = run(capsys, "count", "--descriptor", str(tmp_path / "z.desc"), "--zeros", str(tmp_path / "z.txt"),
                       "--T-grid", "15,25", "--format", "csv")
    assert code == EXIT_PASS and "\n15.0,1," in out


def test_weil_closes(capsys):
    code, out, _ = run(capsys, "weil", "--f", "gaussian:w=0.05", "--v", "0", "--format", "json")
    doc = json.loads(out)
    residual = next(r for r in doc["rows"] if r["term"] == "residual")
    assert code == EXIT_PASS and abs(residual["value_re"]) < 1e-6


def test_weil_bump_path(capsys):
    code, out, _ = run(capsys, "weil", "--f", "bump:r=3")
    assert code == EXIT_PASS and "gamma_left" in out


def test_weil_sweep_reports_K(capsys):
    code, out, _ = run(capsys, "weil", "--f", "gaussian:w=0.05", "--v", "0.55", "--sweep-u", "0.04,0.02,0.01",
                       "--format", "json")
    doc = json.loads(out)
    assert "K" in doc["summary"] and len(doc["rows"]) == 3
    assert code in (EXIT_PASS, EXIT_FAIL)


def test_weil_bad_function(capsys):
    code, _, err = run(capsys, "weil", "--f", "sinc:w=1")
    assert code == EXIT_INPUT and "sinc" in err


def test_li_agreement(capsys):
    code, out, _ = run(capsys, "li", "--n", "1..5", "--methods", "zerosum,arithmetic", "--format", "csv")
    assert code == EXIT_PASS
    assert sum(1 for l in out.splitlines() if ",arithmetic," in l) == 5


def test_li_positivity(capsys):
    code, out, _ = run(capsys, "li", "--n", "1..200", "--methods", "zerosum", "--check-positivity", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_PASS and doc["summary"]["positivity"] == "consistent with RH up to n = 200"


def test_li_zero_is_usage_error(capsys):
    code, _, _ = run(capsys, "li", "--n", "0")
    assert code == EXIT_INPUT


def test_count_grid_and_errors(capsys):
    code, out, _ = run(capsys, "count", "--T-grid", "50:1000:50", "--format", "csv")
    assert code == EXIT_PASS and len([l for l in out.splitlines() if not l.startswith("#")]) == 21
    code, _, _ = run(capsys, "count", "--T-grid", "")
    assert code == EXIT_INPUT
    code, _, err = run(capsys, "count", "--T-grid", "100,20000")
    assert code == EXIT_INPUT and "coverage" in err


def test_landau(capsys):
    code, out, _ = run(capsys, "landau", "--n", "2,6", "--T", "500", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == EXIT_PASS and rows[1]["predicted_re"] == 0.0
    code, _, _ = run(capsys, "landau", "--n", "1")
    assert code == EXIT_INPUT


def test_output_file(capsys, tmp_path):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "count", "--T-grid", "100", "--format", "csv", "--output", str(target))
    assert code == EXIT_PASS and out == "" and target.read_text().startswith("# schema=1")


def test_deterministic_output_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        res = subprocess.run([sys.executable, "-m", "selbergsums.cli", "gsum", "--u", "0.01,0.001", "--v", "0.3",
                              "--format", "csv", "--deterministic", "--output", str(p)], capture_output=True)
        assert res.returncode == EXIT_PASS, res.stderr
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_pretty_rounds_to_six_digits(capsys):
    _, out, _ = run(capsys, "landau", "--n", "2", "--T", "500")
    assert "-110.318" in out and "-110.3178000" not in out


def test_argument_helpers():
    assert int_range("1..3,7") == [1, 2, 3, 7]
    assert int_range("-2..-1") == [-2, -1]
    assert grid("10:30:10") == [10.0, 20.0, 30.0]
    assert float_list("0.1, 0.2") == [0.1, 0.2]
    assert parse_shift("u") == "u"
    assert parse_shift("-log:3") == pytest.approx(-1.0986122886681098)
    for bad in ("log:1", "log:x", "abc"):
        with pytest.raises(Exception):
            parse_shift(bad)
