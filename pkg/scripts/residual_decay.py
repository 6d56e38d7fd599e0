"""Per-iteration residuals of one solve, as an empirical convergence check.

Writes the trace CSV and prints the primal residual, dual change and
KKT residual every ``--every`` iterations.

    python scripts/residual_decay.py --p 20 --gamma 0.1 --lam 0.1 --trace decay.csv
"""
import argparse

import numpy as np

from glinf import SolverConfig, new_problem, solve
from glinf.io import trace_csv, write_text


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=int, default=20)
    parser.add_argument("--gamma", type=float, default=0.1)
    parser.add_argument("--lam", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--paper", action="store_true", help="use the published continuation schedule")
    parser.add_argument("--every", type=int, default=10)
    parser.add_argument("--trace", help="CSV output path")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    m = rng.standard_normal((args.p, args.p))
    spec = new_problem(m.T @ m / args.p + 0.1 * np.eye(args.p), args.gamma, args.lam)
    config = SolverConfig.paper(trace=True) if args.paper else SolverConfig(trace=True)
    result = solve(spec, config)

    print(f"{'iter':>6} {'rho':>9} {'primal':>10} {'dual_chg':>10} {'kkt':>10} {'objective':>14}")
    for d in result.trace:
        if d.iter % args.every == 0 or d.iter == result.iters_used:
            print(f"{d.iter:>6} {d.rho:>9.3g} {d.primal_residual:>10.2e} {d.dual_change:>10.2e} "
                  f"{d.kkt_stationarity:>10.2e} {d.objective:>14.8f}")
    print(f"{result.termination.value} after {result.iters_used} iterations")
    if args.trace:
        write_text(trace_csv(result.trace), args.trace)


if __name__ == "__main__":
    main()
