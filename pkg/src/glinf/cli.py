"""Command line interface: ``glinf solve``, ``glinf sweep`` and ``glinf verify``.

Exit codes: 0 converged, 1 invalid input, 2 rho cap reached, 3 iteration
cap reached, 4 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .core import SolverConfig, new_problem
from .errors import GlinfError
from .io import (SweepSpec, dumps_json, load_covariance, load_samples, matrix_csv,
                 parse_float_list, result_document, run_sweep_grid, sample_covariance,
                 summary_csv, sweep_document, trace_csv, write_text)
from .solver import solve
from .verify import agreement_suite, format_report

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 4
LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("glinf")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _add_data_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--samples", help="CSV of observations, one per row")
    src.add_argument("--covariance", help="CSV of a square symmetric covariance matrix")
    p.add_argument("--ddof", type=int, default=0, choices=(0, 1),
                   help="sample covariance divides by n - ddof (default 0)")
    p.add_argument("--epsilon", type=float, default=SolverConfig.epsilon)
    p.add_argument("--rho0", type=float, default=SolverConfig.rho0)
    p.add_argument("--doubling-interval", type=_positive_int, default=None,
                   help="double rho every N iterations (default: constant rho)")
    p.add_argument("--rho-max", type=float, default=SolverConfig.rho_max)
    p.add_argument("--max-iters", type=_positive_int, default=SolverConfig.max_iters)
    p.add_argument("--literal-stop", action="store_true",
                   help="stop on the relative change of the theta multiplier alone")
    p.add_argument("--strict", action="store_true",
                   help="also require the relative primal residual below epsilon")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = _Parser(prog="glinf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    _add_data_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--trace", help="write per-iteration diagnostics as CSV")

    p = sub.add_parser("sweep", help="solve a grid of (gamma, lambda)")
    _add_data_args(p)
    p.add_argument("--gammas", required=True, help="comma-separated ascending list")
    p.add_argument("--lambdas", required=True, help="comma-separated ascending list")
    p.add_argument("--no-warm-start", action="store_true")
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = sub.add_parser("verify", help="randomized oracle-agreement check")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--out", help="output path (default stdout)")
    return parser


def _covariance(args):
    if args.samples is not None:
        return sample_covariance(load_samples(args.samples), ddof=args.ddof)
    return load_covariance(args.covariance)


def _config(args, trace=False):
    try:
        return SolverConfig(rho0=args.rho0, doubling_interval=args.doubling_interval,
                            rho_max=args.rho_max, epsilon=args.epsilon, max_iters=args.max_iters,
                            trace=trace, strict=args.strict, literal_stop=args.literal_stop)
    except GlinfError as exc:
        raise UsageError(f"invalid solver option: {exc}") from exc


def run_solve(args) -> int:
    S = _covariance(args)
    config = _config(args, trace=args.trace is not None)
    try:
        spec = new_problem(S, args.gamma, args.lam)
    except GlinfError as exc:
        raise UsageError(f"--gamma/--lambda: {exc}") from exc
    result = solve(spec, config)
    if args.format == "json":
        write_text(dumps_json(result_document(result, spec.gamma, spec.lam)), args.out)
    else:
        write_text(matrix_csv(result.theta_star), args.out)
    if args.trace is not None:
        write_text(trace_csv(result.trace), args.trace)
    return result.termination.exit_code


def run_sweep(args) -> int:
    S = _covariance(args)
    config = _config(args)
    try:
        sweep = SweepSpec(parse_float_list(args.gammas), parse_float_list(args.lambdas),
                          warm_start=not args.no_warm_start)
    except GlinfError as exc:
        raise UsageError(f"--gammas/--lambdas: {exc}") from exc
    records = run_sweep_grid(S, sweep, config, jobs=args.jobs)
    doc = sweep_document(records)
    if args.format == "json":
        write_text(dumps_json(doc), args.out)
    else:
        write_text(summary_csv(doc["summary"]), args.out)
    return max(r.termination.exit_code for _, _, r in records)


def run_verify(args) -> int:
    if args.cases < 1:
        raise UsageError(f"--cases must be a positive integer, got {args.cases}")
    reports = agreement_suite(seed=args.seed, cases=args.cases)
    write_text(format_report(reports), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def _configure_logging():
    level = os.environ.get("GLINF_LOG", "quiet").lower()
    logging.basicConfig(stream=sys.stderr, level=LOG_LEVELS.get(level, logging.ERROR),
                        format="glinf %(levelname)s: %(message)s", force=True)


def main(argv=None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        handler = {"solve": run_solve, "sweep": run_sweep, "verify": run_verify}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"glinf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GlinfError as exc:
        print(f"glinf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
