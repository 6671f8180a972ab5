"""Tests for the fraq command line."""

import csv
import io
from fractions import Fraction

import numpy as np
import pytest

from fraq.cli import build_parser, cli_main, collect_overrides
from fraq.config import Config
from fraq.experiments import build_spec
from fraq.output import CONVERGENCE_HEADER, RATE_NOTE, format_value
from fraq.solver import run


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_weights_table(capsys):
    assert cli_main(["weights", "--alpha", "0.5", "--n", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["i,d_i", "0,1", "1,-0.5", "2,-0.125", "3,-0.0625"]


def test_weights_with_fractional_tau(capsys):
    assert cli_main(["weights", "--alpha", "1", "--tau", "1/2", "--n", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[1:] == [["0", "2"], ["1", "-2"]]


def test_kernel_error_curve(capsys):
    assert cli_main(["kernel-error", "--preset", "figure1", "--n", "100"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["i", "eps_abs"]
    assert len(rows) == 102
    assert all(float(error) == 0.0 for _, error in rows[1:16])
    assert all(0.0 <= float(error) < 1e-3 for _, error in rows[16:])


def test_kernel_error_writes_meta(tmp_path):
    out = tmp_path / "out"
    argv = ["kernel-error", "--scheme", "be", "--alpha", "0.4", "--tau", "1/100",
            "--np", "8", "--n", "40", "--output-dir", str(out)]
    assert cli_main(argv) == 0
    assert (out / "kernel_error_be_0.4.csv").exists()
    meta = (out / "meta.txt").read_text()
    assert "command = kernel-error" in meta
    assert "tau = 1/100" in meta


def test_kernel_error_grows_points_with_the_window(tmp_path):
    out = tmp_path / "fig"
    argv = ["kernel-error", "--preset", "figure1", "--n", "1000", "--output-dir", str(out)]
    assert cli_main(argv) == 0
    meta = (out / "meta.txt").read_text()
    assert "n_points = 31+100" in meta

    argv += ["--no-np-auto"]
    assert cli_main(argv) == 0
    assert "n_points = 31+31" in (out / "meta.txt").read_text()


def test_solve_zero_initial_data(capsys):
    argv = ["solve", "--init", "zero", "--grid-m", "5", "--tau", "1/10", "--scheme", "fastsbd"]
    assert cli_main(argv) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["x", "g1", "g2"]
    assert len(rows) == 6
    assert all(float(v) == 0.0 for row in rows[1:] for v in row[1:])


def test_solve_output_round_trips(capsys):
    argv = ["solve", "--grid-m", "7", "--tau", "1/20", "--scheme", "sbd", "--a", "-1"]
    assert cli_main(argv) == 0
    rows = np.array(_rows(capsys.readouterr().out)[1:], dtype=float)

    exp = Config.load(overrides={"grid_m": 7, "tau": "1/20", "schemes": "sbd", "a": -1}).experiment
    result = run(build_spec(exp, exp.alpha_pairs[0], Fraction(1, 20)), "sbd")
    np.testing.assert_array_equal(rows[:, 1], result.final.g1)
    np.testing.assert_array_equal(rows[:, 2], result.final.g2)


def test_solve_snapshots(tmp_path):
    out = tmp_path / "snaps"
    argv = ["solve", "--grid-m", "5", "--tau", "1/10", "--snapshots", "0,1/2",
            "--output-dir", str(out)]
    assert cli_main(argv) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "meta.txt",
        "snapshot_be_n0.csv",
        "snapshot_be_n10.csv",
        "snapshot_be_n5.csv",
    ]


def test_solve_rejects_off_grid_snapshot(capsys):
    argv = ["solve", "--grid-m", "5", "--tau", "1/10", "--snapshots", "1/20"]
    assert cli_main(argv) == 2
    assert "❌ Error" in capsys.readouterr().err


def test_convergence_files(tmp_path, capsys):
    out = tmp_path / "conv"
    argv = ["convergence", "--schemes", "be", "--grid-m", "7", "--taus", "1/10,1/20",
            "--ref-tau", "1/40", "--output-dir", str(out)]
    assert cli_main(argv) == 0

    with open(out / "convergence_be_0.3_0.6.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert tuple(rows[0]) == CONVERGENCE_HEADER
    assert [row["tau"] for row in rows] == [format_value(0.1), format_value(0.05)]
    assert rows[0]["rate1"] == ""
    assert float(rows[1]["rate1"]) > 0

    meta = (out / "meta.txt").read_text()
    assert "command = convergence" in meta
    assert "ref_tau = 1/40" in meta
    assert f"rate_note = {RATE_NOTE}" in meta
    printed = capsys.readouterr().out
    assert "Rate1" in printed
    assert RATE_NOTE in printed


def test_convergence_to_stdout(capsys):
    argv = ["convergence", "--schemes", "fastbe", "--grid-m", "5", "--taus", "1/10",
            "--ref-tau", "1/20"]
    assert cli_main(argv) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# scheme=fastbe alpha1=0.3 alpha2=0.6"
    assert out[1] == f"# {RATE_NOTE}"
    assert out[2] == ",".join(CONVERGENCE_HEADER)


def test_bench(tmp_path, capsys):
    out = tmp_path / "bench"
    argv = ["bench", "--schemes", "be,fastbe", "--grid-m", "5", "--steps", "10,20,40",
            "--output-dir", str(out)]
    assert cli_main(argv) == 0
    with open(out / "bench.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert [(r["scheme"], r["N"]) for r in rows] == [
        ("be", "10"), ("be", "20"), ("be", "40"),
        ("fastbe", "10"), ("fastbe", "20"), ("fastbe", "40"),
    ]
    assert "r2_linear_fastbe" in (out / "meta.txt").read_text()
    assert "R2(cN^2)" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--no-such-flag"],
        ["weights"],
        ["frobnicate"],
        ["solve", "--m", "0.5"],
        ["solve", "--schemes", "bdf3"],
        ["convergence", "--schemes", "fastbe", "--grid-m", "3", "--taus", "1/100,1/300",
         "--ref-tau", "1/600"],
    ],
)
def test_usage_errors_exit_with_two(argv, capsys):
    assert cli_main(argv) == 2


def test_bad_config_file(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("bogus: 1\n")
    assert cli_main(["solve", "--config", str(path)]) == 2
    assert "❌ Error" in capsys.readouterr().err


def test_log_file_option(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    argv = ["weights", "--alpha", "0.5", "--n", "2", "--log-file", str(log_file)]
    assert cli_main(argv) == 0
    assert "fraq weights" in log_file.read_text()


def test_collect_overrides_ignores_unset_values():
    args = build_parser().parse_args(["kernel-error", "--np1", "31"])
    assert collect_overrides(args) == {"np1": 31}
    args = build_parser().parse_args(["solve", "--alpha1", "0.4", "--ns-auto"])
    assert collect_overrides(args) == {"alpha1": 0.4, "ns_auto": True}
    args = build_parser().parse_args(["solve", "--no-np-auto"])
    assert collect_overrides(args) == {"np_auto": False}
