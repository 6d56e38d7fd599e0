"""Randomized agreement check between the ADMM solver and the 2x2 oracle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .core import ProblemSpec, SolverConfig
from .diagnostics import kkt_report, objective
from .oracle import oracle_p2, random_p2_spec
from .solver import solve

AGREEMENT_TOL = 1e-4
OBJECTIVE_SLACK = 1e-6
KKT_TOL = 1e-4


@dataclass
class CaseReport:
    index: int
    spec: ProblemSpec
    max_error: float
    objective_gap: float
    kkt: float
    termination: str
    iters: int

    @property
    def passed(self) -> bool:
        return (self.max_error <= AGREEMENT_TOL and self.objective_gap <= OBJECTIVE_SLACK
                and self.kkt <= KKT_TOL and self.termination == "Converged")


def agreement_suite(seed: int = 42, cases: int = 50,
                    config: SolverConfig = SolverConfig()) -> List[CaseReport]:
    """Solve ``cases`` random 2x2 instances and compare each with the oracle.

    ``objective_gap`` is ``objective(oracle) - objective(solver)``; the
    oracle must not be worse than the solver by more than 1e-6.
    """
    rng = np.random.default_rng(seed)
    reports = []
    for i in range(cases):
        spec = random_p2_spec(rng)
        ref = oracle_p2(spec)
        result = solve(spec, config)
        reports.append(CaseReport(
            index=i,
            spec=spec,
            max_error=float(np.max(np.abs(result.theta_star - ref))),
            objective_gap=objective(spec, ref) - objective(spec, result.theta_star),
            kkt=kkt_report(spec, result.theta_star),
            termination=result.termination.value,
            iters=result.iters_used,
        ))
    return reports


def format_report(reports: List[CaseReport]) -> str:
    lines = [f"{'case':>4}  {'gamma':>8}  {'lambda':>8}  {'max_err':>10}  {'obj_gap':>10}  "
             f"{'kkt':>10}  {'iters':>6}  result"]
    for r in reports:
        lines.append(f"{r.index:>4}  {r.spec.gamma:>8.4f}  {r.spec.lam:>8.4f}  {r.max_error:>10.3e}  "
                     f"{r.objective_gap:>10.3e}  {r.kkt:>10.3e}  {r.iters:>6}  "
                     f"{'pass' if r.passed else 'FAIL'}")
    n_pass = sum(r.passed for r in reports)
    worst = max(reports, key=lambda r: r.max_error)
    lines.append(f"{n_pass}/{len(reports)} pass; worst max-norm discrepancy {worst.max_error:.3e} "
                 f"(case {worst.index}); worst KKT residual {max(r.kkt for r in reports):.3e}")
    for r in reports:
        if not r.passed:
            lines.append(f"FAILED case {r.index}: S={r.spec.S.tolist()} gamma={r.spec.gamma!r} "
                         f"lambda={r.spec.lam!r} ({r.termination})")
    return "\n".join(lines) + "\n"
