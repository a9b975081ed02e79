"""Exit codes, output schemas, and determinism of the command line tool."""

import io
import json
import contextlib

import pytest

from vanishkit.cli import main

EX_A = '{"expr": {"kind": "pp", "builder": "ex_a"}}'
EX_NU = '{"expr": {"kind": "pp", "builder": "ex_nu"}}'
COMB = '{"expr": {"kind": "pp", "builder": "lattice", "spacing": 1.0}}'


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_convolve_csv_schema_and_value():
    code, out, _ = run(["convolve", "--spec", EX_A, "--grid", "100:100:1"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,re,im"
    x, re, im = lines[1].split(",")
    assert float(x) == 100.0
    assert float(re) == pytest.approx(-0.04, abs=1e-12)
    assert float(im) == 0.0
    # 17 significant digits survive in the text
    assert re == "-0.040000000000020464"


def test_decay_vanishing_exits_zero_with_decreasing_sups():
    code, out, _ = run(["decay", "--spec", EX_A, "--radii", "50,100,200"])
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    sups = [float(r[1]) for r in rows]
    assert sups == sorted(sups, reverse=True)


def test_decay_plateau_exits_two():
    code, out, _ = run([
        "decay", "--spec", EX_NU, "--f-center", "0.5", "--f-halfwidth", "0.5",
        "--radii", "50,100", "--epsilon", "0.1", "--format", "json",
    ])
    assert code == 2
    report = json.loads(out)
    assert report["verdict"] == "not-vanishing"
    assert report["K_eps_estimate"] is None


def test_coeffs_exit_codes():
    harmonic = ('{"expr": {"kind": "pp", "builder": "lattice", "spacing": 1.0,'
                ' "weights": "harmonic"}}')
    code, out, _ = run(["coeffs", "--spec", harmonic, "--rmax", "100"])
    assert code == 0
    assert out.splitlines()[0] == "verdict,radius,scanned"
    code, _, _ = run(["coeffs", "--spec", COMB, "--rmax", "100"])
    assert code == 2


def test_mean_csv():
    code, out, _ = run(["mean", "--spec", COMB, "--nlist", "5,10"])
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert [r[0] for r in rows] == ["5", "10"]
    assert float(rows[0][1]) == pytest.approx(0.25, abs=1e-12)


def test_fourier_modes():
    atoms = '{"expr": {"kind": "pp", "builder": "finite_atoms", "atoms": [[0.0, 1.0, 0.0]]}}'
    code, out, _ = run(["fourier", "--spec", atoms, "--grid", "0:1:0.5"])
    assert code == 0
    assert out.splitlines()[0] == "k,re,im"
    assert all(line.split(",")[1] == "1" for line in out.strip().splitlines()[1:])

    tri = '{"expr": {"kind": "ac", "builder": "triangle", "center": 0.0, "halfwidth": 1.0, "height": 1.0}}'
    code, out, _ = run(["fourier", "--spec", tri, "--grid", "0:1:1"])
    assert code == 0
    vals = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert vals[0] == pytest.approx(1.0, abs=1e-10)
    assert vals[1] == pytest.approx(0.0, abs=1e-10)

    code, out, _ = run(["fourier", "--grid", "0:1:1", "--truncation", "5"])
    assert code == 0
    assert out.splitlines()[0] == "k,value"
    assert float(out.strip().splitlines()[1].split(",")[1]) == pytest.approx(7.875)


def test_bessel_table_within_tolerance():
    code, out, _ = run(["bessel", "--grid", "0:10:0.5"])
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 21
    assert max(float(r.split(",")[3]) for r in rows) <= 1e-8


def test_rlcheck_json_schema():
    code, out, _ = run(["rlcheck", "--grid", "-1:1:0.5", "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"max_deviation", "k_window", "tail_estimate", "quad_estimate", "rows"}
    assert set(report["rows"][0]) == {
        "x", "direct_re", "direct_im", "spectral_re", "spectral_im", "deviation"
    }
    assert report["max_deviation"] <= 1e-4


def test_rajchman_exit_codes():
    code, _, _ = run(["rajchman", "--spec", COMB, "--radii", "4,8"])
    assert code == 2
    finite = '{"expr": {"kind": "pp", "builder": "finite_atoms", "atoms": [[0.0, 1.0, 0.0]]}}'
    code, _, _ = run(["rajchman", "--spec", finite, "--radii", "4,8"])
    assert code == 0


def test_blocks_validation_failure_exits_two():
    code, out, _ = run(["blocks", "--spec", '{"recipe": "ex_nu", "n": 25}', "--format", "json"])
    assert code == 2
    report = json.loads(out)
    assert report["overall"] is False
    assert report["h_vague_null"] is False
    assert report["h_support"] is True


def test_blocks_pass_reports_coverage():
    parts = [
        {"shift": float(n), "atoms": [[0.0, 2.0 ** -n, 0.0]]} for n in range(1, 41)
    ]
    spec = json.dumps({"window": [-0.5, 0.5], "parts": parts})
    code, out, _ = run(["blocks", "--spec", spec, "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["overall"] is True
    assert report["n_parts"] == 40
    assert report["covered"][1] >= 40.0


def test_malformed_json_exits_one_with_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"expr":\n {"kind": }\n}')
    code, _, err = run(["decay", "--spec", str(bad), "--radii", "10"])
    assert code == 1
    assert "line 2" in err


def test_usage_errors_exit_one():
    code, _, _ = run(["decay", "--radii", "10"])  # missing --spec
    assert code == 1
    code, _, _ = run(["decay", "--spec", EX_A, "--radii", "ten"])
    assert code == 1
    code, _, _ = run(["frobnicate"])
    assert code == 1
    code, _, _ = run(["decay", "--spec", EX_A, "--radii", "10", "--format", "yaml"])
    assert code == 1


def test_spec_file_not_found_exits_one():
    code, _, err = run(["decay", "--spec", "/no/such/file.json", "--radii", "10"])
    assert code == 1
    assert "not found" in err


def test_output_deterministic_and_out_flag(tmp_path):
    args = ["decay", "--spec", EX_A, "--radii", "100,200", "--format", "json"]
    _, first, _ = run(args)
    _, second, _ = run(args)
    assert first == second
    target = tmp_path / "report.json"
    code, _, _ = run(args + ["--out", str(target)])
    assert code == 0
    assert target.read_text() == first


def test_negative_grid_values_accepted():
    code, out, _ = run(["convolve", "--spec", EX_A, "--grid", "-2:2:1"])
    assert code == 0
    assert len(out.strip().splitlines()) == 6


def test_suite_subset_runs_and_passes():
    code, out, _ = run(["suite", "--only", "1,3"])
    assert code == 0
    assert "PASS   1." in out
    assert "PASS   3." in out
    assert "2/2 criteria passed" in out
