import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from rabi_spectra.cli import main

BASE = ["--omega", "1", "--delta", "0", "--g", "0.4", "--lambda", "0.2",
        "--eps", "0.1"]


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_closed_spectrum_row_count(capsys):
    code, out, _ = run_cli(["spectrum", "--method", "closed", *BASE,
                            "--nmax", "9"], capsys)
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "index,energy,method,flags"
    assert len(rows) - 1 == 20


def test_method_regime_mismatch_exit_2(capsys):
    code, _out, err = run_cli(
        ["spectrum", "--method", "heun", "--omega", "1", "--delta", "0.4",
         "--lambda", "0.1", "--g", "0.6", "--eps", "0.15",
         "--emin", "-1", "--emax", "2"], capsys)
    assert code == 2
    assert "heun" in err


def test_validation_exit_2_on_bad_params(capsys):
    code, _out, err = run_cli(["spectrum", "--method", "closed", "--omega",
                               "1", "--lambda", "0.5"], capsys)
    assert code == 2


def test_json_and_csv_encode_identical_data(tmp_path, capsys):
    args = ["spectrum", "--method", "closed", *BASE, "--nmax", "3"]
    code, out_csv, _ = run_cli(args + ["--format", "csv"], capsys)
    assert code == 0
    code, out_json, _ = run_cli(args + ["--format", "json"], capsys)
    assert code == 0
    creader = csv.DictReader(io.StringIO(out_csv))
    crows = list(creader)
    jrows = json.loads(out_json)["rows"]
    assert len(crows) == len(jrows)
    for cr, jr in zip(crows, jrows):
        for key in cr:
            assert cr[key] == str(jr[key])


def test_determinism_byte_identical(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["spectrum", "--method", "closed", *BASE, "--nmax", "5"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert b"\r" not in out1.read_bytes()


def test_seventeen_digit_floats(capsys):
    code, out, _ = run_cli(["spectrum", "--method", "closed", *BASE,
                            "--nmax", "0"], capsys)
    row = out.strip().splitlines()[1].split(",")
    # 1/3-ish energies keep 17 significant digits
    assert len(row[1].replace("-", "").replace(".", "").lstrip("0")) >= 15


def test_gscan_empty_window(capsys):
    code, out, _ = run_cli(["gscan", "--omega", "1", "--delta", "0.4",
                            "--g", "0.6", "--eps", "0.15",
                            "--emin", "0.5", "--emax", "0.5"], capsys)
    assert code == 0
    assert out.strip() == "energy,scaled_g,scale_log,flags"


def test_gscan_sign_changes_match_spectrum_roots(tmp_path, capsys):
    common = ["--omega", "1", "--delta", "0.4", "--g", "0.6", "--eps", "0.15",
              "--emin", "-0.8", "--emax", "0.2", "--grid", "0.05"]
    code, out, _ = run_cli(["gscan", *common], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    vals = [(float(r["energy"]), float(r["scaled_g"]), r["flags"])
            for r in rows]
    crossings = [0.5 * (a[0] + b[0]) for a, b in zip(vals, vals[1:])
                 if not a[2] and not b[2] and a[1] * b[1] < 0]
    code, out2, _ = run_cli(["spectrum", "--method", "heun", *common], capsys)
    assert code == 0
    roots = [float(r["energy"]) for r in csv.DictReader(io.StringIO(out2))]
    assert len(crossings) == len(roots)
    for c, r in zip(sorted(crossings), sorted(roots)):
        assert abs(c - r) <= 0.05


def test_bcf_compare_oracle_error_column(capsys):
    code, out, _ = run_cli(
        ["spectrum", "--method", "bcf", "--omega", "1", "--delta", "0.3",
         "--eps", "0", "--g", "0.05", "--lambda", "0.02",
         "--emin", "-0.5", "--emax", "1.5", "--compare-oracle"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows
    assert all(float(r["error_vs_oracle"]) <= 5e-3 for r in rows)


def test_diagnose_exit_codes(tmp_path):
    out = tmp_path / "report.json"
    args = ["diagnose", "--omega", "1", "--delta", "0.3", "--eps", "0.1",
            "--g", "0.2", "--lambda", "0.1", "--out", str(out)]
    assert main(args) == 0
    rep = json.loads(out.read_text())
    assert rep["residuals_ok"]
    assert "che-series-origin" in rep["mismatched_entries"]
    assert main(args + ["--self-test"]) == 3


def test_console_script_entrypoint():
    res = subprocess.run([sys.executable, "-m", "rabi_spectra.cli"],
                         capture_output=True)
    assert res.returncode == 2  # argparse: missing subcommand


def test_atomic_write_leaves_no_temp_files(tmp_path):
    out = tmp_path / "t.csv"
    args = ["spectrum", "--method", "closed", *BASE, "--nmax", "2",
            "--out", str(out)]
    assert main(args) == 0
    leftovers = [p for p in tmp_path.iterdir() if p.name != "t.csv"]
    assert leftovers == []
