import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from glinf.cli import main
from glinf.core import SolverConfig, new_problem
from glinf.errors import EmptyFile, NonNumericCell, RaggedRows
from glinf.io import (TRACE_FIELDS, SweepSpec, load_covariance, load_samples, run_sweep_grid,
                      sample_covariance, theta_from_document)
from glinf.oracle import oracle_diagonal
from glinf.solver import solve


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def write_matrix(tmp_path, name, a, header=None):
    buf = io.StringIO()
    w = csv.writer(buf)
    if header:
        w.writerow(header)
    for row in np.asarray(a):
        w.writerow([repr(float(x)) for x in row])
    return write(tmp_path, name, buf.getvalue())


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_load_samples(tmp_path):
    assert load_samples(write(tmp_path, "a.csv", "1,2\n3,4\n5,6\n")).shape == (3, 2)
    x = load_samples(write(tmp_path, "b.csv", "x,y\n1,2\n3,4\n"))
    assert np.array_equal(x, [[1, 2], [3, 4]])


def test_load_samples_errors(tmp_path):
    with pytest.raises(RaggedRows):
        load_samples(write(tmp_path, "r.csv", "1,2\n1,2,3\n"))
    with pytest.raises(NonNumericCell) as err:
        load_samples(write(tmp_path, "n.csv", "1,2\n3,abc\n"))
    assert (err.value.row, err.value.column) == (2, 2)
    with pytest.raises(EmptyFile):
        load_samples(write(tmp_path, "e.csv", ""))
    with pytest.raises(EmptyFile):
        load_samples(write(tmp_path, "h.csv", "x,y\n"))


def test_sample_covariance_examples():
    assert np.array_equal(sample_covariance([[1, 0], [-1, 0]]), [[1, 0], [0, 0]])
    assert np.array_equal(sample_covariance([[3, 4]]), np.zeros((2, 2)))
    assert np.array_equal(sample_covariance([[1, 1], [-1, -1]]), [[1, 1], [1, 1]])
    assert np.array_equal(sample_covariance([[1, 0], [-1, 0]], ddof=1), [[2, 0], [0, 0]])


def test_sample_covariance_matches_numpy(rng):
    x = rng.standard_normal((30, 4))
    s = sample_covariance(x)
    assert np.allclose(s, np.cov(x, rowvar=False, bias=True), atol=1e-14)
    assert np.array_equal(s, s.T)


def test_load_covariance_must_be_square(tmp_path):
    with pytest.raises(Exception):
        load_covariance(write(tmp_path, "c.csv", "1,2,3\n4,5,6\n"))


def test_cli_solve_inverse(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", [[2, 1], [1, 2]])
    code, out, _ = run_cli(["solve", "--covariance", cov, "--gamma", "0", "--lambda", "10"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"p", "theta", "termination", "iters", "objective", "primal_residual",
                        "dual_change", "constraint_violation", "min_eigenvalue", "kkt_stationarity"}
    assert np.max(np.abs(theta_from_document(doc) - np.array([[2, -1], [-1, 2]]) / 3)) <= 1e-5


def test_cli_solve_samples_lambda_zero(tmp_path, capsys, rng):
    x = rng.standard_normal((40, 3))
    path = write_matrix(tmp_path, "x.csv", x, header=["a", "b", "c"])
    code, out, _ = run_cli(["solve", "--samples", path, "--lambda", "0", "--gamma", "0.5"], capsys)
    assert code == 0
    want = oracle_diagonal(new_problem(sample_covariance(x), 0.5, 0))
    assert np.max(np.abs(theta_from_document(json.loads(out)) - want)) <= 1e-5


def test_cli_conflicting_sources(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", np.eye(2))
    code, _, err = run_cli(["solve", "--samples", cov, "--covariance", cov,
                            "--gamma", "0", "--lambda", "1"], capsys)
    assert code == 1 and "--samples" in err and "--covariance" in err


def test_cli_bad_file_names_location(tmp_path, capsys):
    path = write(tmp_path, "bad.csv", "1,2\n3,x\n")
    code, _, err = run_cli(["solve", "--samples", path, "--gamma", "0", "--lambda", "1"], capsys)
    assert code == 1 and "row 2" in err and "column 2" in err
    code, _, err = run_cli(["solve", "--covariance", str(tmp_path / "missing.csv"),
                            "--gamma", "0", "--lambda", "1"], capsys)
    assert code == 1 and "missing.csv" in err


def test_cli_negative_parameter(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", np.eye(2))
    code, _, err = run_cli(["solve", "--covariance", cov, "--gamma", "-1", "--lambda", "1"], capsys)
    assert code == 1 and "gamma" in err


def test_cli_exit_codes_for_termination(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", [[1, 0.9], [0.9, 1]])
    base = ["solve", "--covariance", cov, "--gamma", "0.05", "--lambda", "0.2", "--epsilon", "1e-300"]
    assert run_cli(base + ["--max-iters", "5"], capsys)[0] == 3
    assert run_cli(base + ["--doubling-interval", "1", "--rho-max", "8"], capsys)[0] == 2


def test_cli_json_roundtrip_bit_identical(tmp_path, capsys, rng):
    S = rng.standard_normal((4, 4))
    S = S @ S.T + np.eye(4)
    cov = write_matrix(tmp_path, "cov.csv", S)
    out = tmp_path / "res.json"
    assert run_cli(["solve", "--covariance", cov, "--gamma", "0.1", "--lambda", "0.3",
                    "--out", str(out)], capsys)[0] == 0
    theta = theta_from_document(json.loads(out.read_text()))
    direct = solve(new_problem(load_covariance(cov), 0.1, 0.3)).theta_star
    assert np.array_equal(theta, direct)


def test_cli_csv_format(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", [[2, 1], [1, 2]])
    code, out, _ = run_cli(["solve", "--covariance", cov, "--gamma", "0", "--lambda", "10",
                            "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2 and all(len(r) == 2 for r in rows)


def test_cli_trace_schema(tmp_path, capsys):
    for i, S in enumerate(([[1, 0.9], [0.9, 1]], [[2, 0.3, 0], [0.3, 1, 0.2], [0, 0.2, 1.5]])):
        cov = write_matrix(tmp_path, f"cov{i}.csv", S)
        trace = tmp_path / f"trace{i}.csv"
        code, out, _ = run_cli(["solve", "--covariance", cov, "--gamma", "0.1", "--lambda", "0.2",
                                "--trace", str(trace)], capsys)
        rows = list(csv.reader(trace.open()))
        assert tuple(rows[0]) == TRACE_FIELDS
        assert len(rows) - 1 == json.loads(out)["iters"]
        assert all(len(r) == len(TRACE_FIELDS) for r in rows)


def test_sweep_single_point_matches_solve(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", [[1, 0.5], [0.5, 2]])
    _, solo, _ = run_cli(["solve", "--covariance", cov, "--gamma", "0.1", "--lambda", "0.3"], capsys)
    code, swept, _ = run_cli(["sweep", "--covariance", cov, "--gammas", "0.1", "--lambdas", "0.3"], capsys)
    doc = json.loads(swept)
    assert code == 0 and doc["results"][0] == json.loads(solo)
    assert doc["summary"][0]["termination"] == "Converged"


def test_sweep_warm_vs_cold(rng):
    S = rng.standard_normal((5, 5))
    S = S.T @ S / 5 + 0.1 * np.eye(5)
    lambdas = (0.0, 0.05, 0.1, 0.2, 0.4)
    warm = run_sweep_grid(S, SweepSpec((0.1,), lambdas, warm_start=True))
    cold = run_sweep_grid(S, SweepSpec((0.1,), lambdas, warm_start=False))
    for (g, lam, w), (_, _, c) in zip(warm, cold):
        assert np.max(np.abs(w.theta_star - c.theta_star)) <= 1e-5
    assert warm[0][2].theta_star[0, 1] == 0
    assert np.max(np.abs(warm[0][2].theta_star - oracle_diagonal(new_problem(S, 0.1, 0)))) <= 1e-5


def test_sweep_order_and_parallel(rng):
    S = np.array([[1.0, 0.4, 0.1], [0.4, 2.0, 0.3], [0.1, 0.3, 1.5]])
    sweep = SweepSpec((0.0, 0.1), (0.05, 0.2))
    serial = run_sweep_grid(S, sweep)
    assert [(g, lam) for g, lam, _ in serial] == [(0.0, 0.05), (0.1, 0.05), (0.0, 0.2), (0.1, 0.2)]
    parallel = run_sweep_grid(S, sweep, jobs=2)
    for (_, _, a), (_, _, b) in zip(serial, parallel):
        assert np.max(np.abs(a.theta_star - b.theta_star)) <= 1e-5


@pytest.mark.parametrize("gammas,lambdas", [((), (1,)), ((0.2, 0.1), (1,)), ((0.1,), (-1,))])
def test_sweep_spec_validation(gammas, lambdas):
    with pytest.raises(ValueError):
        SweepSpec(gammas, lambdas)


def test_sweep_cli_csv_summary(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", [[1, 0.5], [0.5, 2]])
    code, out, _ = run_cli(["sweep", "--covariance", cov, "--gammas", "0,0.1",
                            "--lambdas", "0.1,0.3", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert list(rows[0]) == ["gamma", "lambda", "objective", "iterations", "termination"]


def test_sweep_cli_rejects_unsorted(tmp_path, capsys):
    cov = write_matrix(tmp_path, "cov.csv", np.eye(2))
    code, _, err = run_cli(["sweep", "--covariance", cov, "--gammas", "0.2,0.1", "--lambdas", "1"], capsys)
    assert code == 1 and "--gammas" in err


def test_verify_small_and_deterministic(capsys):
    code1, out1, _ = run_cli(["verify", "--cases", "5", "--seed", "7"], capsys)
    code2, out2, _ = run_cli(["verify", "--cases", "5", "--seed", "7"], capsys)
    assert code1 == code2 == 0 and out1 == out2
    assert "5/5 pass" in out1


def test_verify_rejects_zero_cases(capsys):
    code, _, err = run_cli(["verify", "--cases", "0"], capsys)
    assert code == 1 and "--cases" in err


def test_verify_failure_exit_code(monkeypatch, capsys):
    import glinf.verify as verify_mod

    monkeypatch.setattr(verify_mod, "AGREEMENT_TOL", -1.0)
    code, out, _ = run_cli(["verify", "--cases", "2"], capsys)
    assert code == 4 and "FAILED case 0" in out and "gamma=" in out


def test_logging_goes_to_stderr_only(tmp_path):
    cov = write_matrix(tmp_path, "cov.csv", [[2, 1], [1, 2]])
    env = dict(os.environ, GLINF_LOG="info")
    proc = subprocess.run([sys.executable, "-m", "glinf", "solve", "--covariance", cov,
                           "--gamma", "0", "--lambda", "10"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    json.loads(proc.stdout)
    assert "Converged" in proc.stderr
