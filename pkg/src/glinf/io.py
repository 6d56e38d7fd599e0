"""CSV ingestion, sample covariance, result documents and sweeps."""
from __future__ import annotations

import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import Diagnostics, SolveResult, SolverConfig, new_problem, sym_matrix, symmetrize
from .errors import DimensionError, EmptyFile, InvalidInput, NonNumericCell, RaggedRows
from .solver import solve

log = logging.getLogger(__name__)

TRACE_FIELDS = ("iter", "rho", "objective", "aug_lagrangian", "primal_residual", "dual_change",
                "constraint_violation", "min_eigenvalue", "kkt_stationarity")
SUMMARY_FIELDS = ("gamma", "lambda", "objective", "iterations", "termination")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_numeric_csv(path) -> np.ndarray:
    """Rows of comma-separated numbers; a non-numeric first row is a header.

    Blank lines are ignored. Row and column numbers in errors are 1-based
    and count the header.
    """
    try:
        with open(path, newline="") as fh:
            rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1)
                    if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise EmptyFile(f"{path} contains no data rows")
    width = len(rows[0][1])
    out = np.empty((len(rows), width))
    for k, (lineno, row) in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(f"{path}: row {lineno} has {len(row)} fields, expected {width}")
        for j, cell in enumerate(row):
            try:
                out[k, j] = float(cell)
            except ValueError:
                raise NonNumericCell(lineno, j + 1, cell) from None
    if not np.all(np.isfinite(out)):
        raise InvalidInput(f"{path} contains non-finite values")
    return out


def load_samples(path) -> np.ndarray:
    """Observations as an ``n x p`` array, one row per observation."""
    return read_numeric_csv(path)


def load_covariance(path) -> np.ndarray:
    a = read_numeric_csv(path)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{path}: covariance must be square, got {a.shape[0]}x{a.shape[1]}")
    return sym_matrix(a)


def sample_covariance(data, ddof: int = 0) -> np.ndarray:
    """``(1/(n - ddof)) * sum (x_i - mean)(x_i - mean)^T``.

    The default normalization is 1/n; a single observation gives the zero
    matrix.
    """
    x = np.atleast_2d(np.asarray(data, dtype=np.float64))
    n = x.shape[0]
    if n < 1:
        raise EmptyFile("no observations")
    if n - ddof < 1:
        raise InvalidInput(f"ddof={ddof} needs more than {n} observation(s)")
    xc = x - x.mean(axis=0)
    return sym_matrix(symmetrize(xc.T @ xc / (n - ddof)), check=False)


def result_document(result: SolveResult, gamma: float, lam: float) -> dict:
    diag = result.final_diagnostics
    theta = result.theta_star
    return {
        "p": int(theta.shape[0]),
        "gamma": gamma,
        "lambda": lam,
        "theta": [float(x) for x in theta.ravel()],
        "termination": result.termination.value,
        "iters": result.iters_used,
        "objective": diag.objective,
        "primal_residual": diag.primal_residual,
        "dual_change": diag.dual_change,
        "constraint_violation": diag.constraint_violation,
        "min_eigenvalue": diag.min_eigenvalue,
        "kkt_stationarity": diag.kkt_stationarity,
    }


def theta_from_document(doc: dict) -> np.ndarray:
    p = int(doc["p"])
    return np.array(doc["theta"], dtype=np.float64).reshape(p, p)


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def matrix_csv(a: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(a):
        writer.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def trace_csv(trace: Sequence[Diagnostics]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_FIELDS)
    for d in trace:
        writer.writerow([repr(getattr(d, f)) for f in TRACE_FIELDS])
    return buf.getvalue()


def summary_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


@dataclass(frozen=True)
class SweepSpec:
    """Grid of penalty weights and bounds, each strictly ascending."""

    gammas: tuple
    lambdas: tuple
    warm_start: bool = True

    def __post_init__(self):
        for name in ("gammas", "lambdas"):
            vals = tuple(float(v) for v in getattr(self, name))
            if not vals:
                raise InvalidInput(f"{name} must be nonempty")
            if any(v < 0 or not np.isfinite(v) for v in vals):
                raise InvalidInput(f"{name} must be finite and nonnegative")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise InvalidInput(f"{name} must be strictly ascending")
            object.__setattr__(self, name, vals)

    def points(self):
        """Grid points ``(gamma, lambda)`` in lambda-major order."""
        return [(g, lam) for lam in self.lambdas for g in self.gammas]


def _solve_chain(S, points, config, warm_start, init=None):
    """Solve ``points`` in order, optionally warm-starting from the previous solution."""
    out = []
    for gamma, lam in points:
        result = solve(new_problem(S, gamma, lam), config, init=init if warm_start else None)
        log.info("gamma=%g lambda=%g: %s in %d iterations", gamma, lam,
                 result.termination.value, result.iters_used)
        out.append((gamma, lam, result))
        init = result.theta_star
    return out


def run_sweep_grid(S, sweep: SweepSpec, config: SolverConfig = SolverConfig(),
                   jobs: int = 1) -> list:
    """Solve every grid point; returns ``(gamma, lambda, SolveResult)`` in lambda-major order.

    With ``jobs == 1`` a single warm-start chain runs through the whole
    grid. With more jobs each lambda row is an independent chain.
    """
    S = sym_matrix(S)
    if jobs <= 1:
        return _solve_chain(S, sweep.points(), config, sweep.warm_start)
    rows = [[(g, lam) for g in sweep.gammas] for lam in sweep.lambdas]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_solve_chain, S, row, config, sweep.warm_start) for row in rows]
        return [item for f in futures for item in f.result()]


def sweep_document(records) -> dict:
    results = [result_document(r, g, lam) for g, lam, r in records]
    summary = [{"gamma": g, "lambda": lam, "objective": r.final_diagnostics.objective,
                "iterations": r.iters_used, "termination": r.termination.value}
               for g, lam, r in records]
    return {"results": results, "summary": summary}


def parse_float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"cannot parse number list {text!r}") from None


def write_text(text: str, path: Optional[str], stream=None):
    if path is None:
        (stream or sys.stdout).write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
