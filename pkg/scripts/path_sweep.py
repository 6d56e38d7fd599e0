"""Iteration counts along a lambda path with and without warm starts.

    python scripts/path_sweep.py --p 30 --gamma 0.05
"""
import argparse

import numpy as np

from glinf.io import SweepSpec, run_sweep_grid


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=int, default=30)
    parser.add_argument("--gamma", type=float, default=0.05)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    m = rng.standard_normal((2 * args.p, args.p))
    S = m.T @ m / (2 * args.p)
    lambdas = tuple(np.round(np.linspace(0.0, 0.5, 11), 3))
    warm = run_sweep_grid(S, SweepSpec((args.gamma,), lambdas, warm_start=True))
    cold = run_sweep_grid(S, SweepSpec((args.gamma,), lambdas, warm_start=False))
    print(f"{'lambda':>7} {'warm its':>9} {'cold its':>9} {'max |diff|':>11} {'nnz offdiag':>12}")
    for (_, lam, w), (_, _, c) in zip(warm, cold):
        t = w.theta_star
        nnz = int(np.count_nonzero(np.abs(t - np.diag(np.diag(t))) > 1e-8))
        print(f"{lam:>7.3f} {w.iters_used:>9} {c.iters_used:>9} "
              f"{np.max(np.abs(t - c.theta_star)):>11.1e} {nnz:>12}")


if __name__ == "__main__":
    main()
