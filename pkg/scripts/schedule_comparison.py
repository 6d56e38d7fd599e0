"""Accuracy of the published continuation schedule versus a constant penalty.

Runs the randomized 2x2 oracle suite and the two analytic regimes under
several penalty schedules and prints failure counts against the
acceptance tolerances (1e-4 for the 2x2 oracle, 1e-5 for the analytic
regimes).

    python scripts/schedule_comparison.py --seeds 10
"""
import argparse
import time

import numpy as np

from glinf import SolverConfig, new_problem, oracle_diagonal, oracle_p2, oracle_unconstrained, solve
from glinf.oracle import random_p2_spec

SCHEDULES = {
    "paper (rho0=1, x2/20 its, eps=1e-8, literal stop)": SolverConfig.paper(),
    "paper schedule, guarded stop": SolverConfig.paper(literal_stop=False),
    "rho0=0.01, x2/20 its, guarded stop": SolverConfig(rho0=0.01, doubling_interval=20, epsilon=1e-8),
    "constant rho=1, eps=1e-10 (default)": SolverConfig(),
}


def random_cov(rng, p):
    m = rng.standard_normal((p, p))
    return m.T @ m / p + 0.1 * np.eye(p)


def evaluate(config, seeds):
    p2_fail, p2_worst, an_fail, an_worst = 0, 0.0, 0, 0.0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        for _ in range(50):
            spec = random_p2_spec(rng)
            err = np.max(np.abs(solve(spec, config).theta_star - oracle_p2(spec)))
            p2_worst = max(p2_worst, err)
            p2_fail += err > 1e-4
        rng = np.random.default_rng(100 + seed)
        for p in (2, 5, 20):
            S = random_cov(rng, p)
            cases = [new_problem(S, rng.uniform(0, 1), 0)]
            inv = np.linalg.inv(S)
            off = np.abs(inv - np.diag(np.diag(inv))).max()
            cases.append(new_problem(S, 0, 1.5 * off + 0.1))
            for spec, ref in zip(cases, (oracle_diagonal(cases[0]), oracle_unconstrained(cases[1]))):
                err = np.max(np.abs(solve(spec, config).theta_star - ref))
                an_worst = max(an_worst, err)
                an_fail += err > 1e-5
    return p2_fail, p2_worst, an_fail, an_worst


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=3)
    args = parser.parse_args()
    seeds = range(args.seeds)
    n2, na = 50 * len(seeds), 6 * len(seeds)
    print(f"{'schedule':<52} {'2x2 fails':>10} {'worst':>9} {'analytic fails':>15} {'worst':>9} {'time':>6}")
    for name, cfg in SCHEDULES.items():
        t0 = time.perf_counter()
        f2, w2, fa, wa = evaluate(cfg, seeds)
        print(f"{name:<52} {f'{f2}/{n2}':>10} {w2:>9.1e} {f'{fa}/{na}':>15} {wa:>9.1e} "
              f"{time.perf_counter() - t0:>5.1f}s")


if __name__ == "__main__":
    main()
