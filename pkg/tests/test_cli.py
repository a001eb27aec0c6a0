"""Command-line interface smoke tests against the CSV contract."""

import csv

import pytest

from rknsplit import build_scheme, encode
from rknsplit.bench import CSV_COLUMNS
from rknsplit.cli import main


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_schemes_list(capsys):
    assert main(["schemes", "list"]) == 0
    out = capsys.readouterr().out
    for name in ("A17", "A18", "A19", "B17", "B18", "B19"):
        assert name in out


@pytest.mark.parametrize("name", ("A17", "B19", "STRANG_ABA"))
def test_schemes_check(name, capsys):
    assert main(["schemes", "check", name]) == 0
    out = capsys.readouterr().out
    assert "palindromic : True" in out


def test_schemes_check_unknown():
    assert main(["schemes", "check", "A99"]) == 1


def test_sweep_writes_contract_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--problem", "kepler", "--schemes", "A17,B17",
        "--costs", "50:100:2", "--tf", "10", "--out", str(out),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 5  # header + 2 schemes x 2 costs
    assert {r[0] for r in rows[1:]} == {"A17", "B17"}


def test_sweep_single_cost_point(tmp_path):
    out = tmp_path / "one.csv"
    assert main([
        "sweep", "--schemes", "A19", "--costs", "80", "--tf", "10",
        "--out", str(out),
    ]) == 0
    assert len(read_csv(out)) == 2


def test_scan_pendulum(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main([
        "scan", "--problem", "pendulum", "--schemes", "A17",
        "--alpha", "0:2:3", "--cost", "85", "--tf", "10", "--out", str(out),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert [float(r[2]) for r in rows[1:]] == [0.0, 1.0, 2.0]


def test_convergence_reports_order(capsys):
    rc = main([
        "convergence", "--problem", "kepler", "--scheme", "A17",
        "--steps", "24", "--levels", "3", "--tf", "6.283185307179586",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "estimated order:" in out


def test_arenstorf_command(tmp_path):
    out = tmp_path / "arenstorf.csv"
    rc = main([
        "arenstorf", "--scheme", "A19", "--steps", "400", "--out", str(out),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert rows[1][CSV_COLUMNS.index("problem")] == "arenstorf"
    assert float(rows[1][CSV_COLUMNS.index("final_pos_err")]) > 0.0


def test_schrodinger_command(tmp_path):
    out = tmp_path / "schrodinger.csv"
    samples = tmp_path / "samples.csv"
    rc = main([
        "schrodinger", "--schemes", "A19", "--costs", "40", "--tf", "20",
        "--out", str(out), "--samples", str(samples),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert rows[1][CSV_COLUMNS.index("problem")] == "schrodinger_poschl_teller"
    sample_rows = read_csv(samples)
    assert sample_rows[0] == ["t", "norm_err", "energy_err"]
    assert len(sample_rows) > 1


def test_integrate_trajectory_dump(tmp_path):
    out = tmp_path / "trajectory.csv"
    rc = main([
        "integrate", "--problem", "kepler", "--scheme", "A17",
        "--h", "0.1", "--tf", "5", "--stride", "5", "--out", str(out),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "y1", "y2", "v1", "v2", "energy_err"]
    assert len(rows) == 11  # header + 50 steps / stride 5


def test_external_coefficients_flow(tmp_path):
    path = tmp_path / "ext.coeffs"
    scheme = build_scheme("A18")
    text = encode(scheme).replace("name A18", "name MYA18")
    path.write_text(text, encoding="utf-8")
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--schemes", "MYA18", "--costs", "60", "--tf", "10",
        "--external-coeffs", str(path), "--out", str(out),
    ])
    assert rc == 0
    rows = read_csv(out)
    assert rows[1][0] == "MYA18"


def test_error_exit_code(capsys):
    rc = main(["sweep", "--schemes", "NOSUCH", "--costs", "50", "--tf", "10"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
