"""Reference solutions for small or analytically tractable instances.

Nothing here uses the ADMM iteration or the proximal operators; the only
shared kernel is the symmetric eigendecomposition.
"""
from __future__ import annotations

import math

import numpy as np

from .core import ProblemSpec, offdiag, sym_matrix
from .diagnostics import kkt_report
from .errors import (ConstraintActive, DimensionError, NonPositiveDiagonal,
                     NotPositiveDefinite, OracleAuditFailure)
from .linalg import eig_sym

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
AUDIT_TOL = 1e-6


def _inner_t(s11, s22, c):
    """Determinant ``ab - c^2`` of the inner minimizer for fixed off-diagonal ``c``."""
    s = s11 * s22
    return (1.0 + np.sqrt(1.0 + 4.0 * s * c * c)) / (2.0 * s)


def reduced_objective_p2(spec: ProblemSpec, c):
    """Objective minimized over the diagonal, as a function of the off-diagonal ``c``.

    For fixed ``c`` the optimal diagonal is ``a = S22 t``, ``b = S11 t`` and
    the value is ``-log t + 2 S11 S22 t + 2 S12 c + 2 gamma |c|``.
    """
    s11, s22, s12 = spec.S[0, 0], spec.S[1, 1], spec.S[0, 1]
    c = np.asarray(c, dtype=np.float64)
    t = _inner_t(s11, s22, c)
    return -np.log(t) + 2.0 * s11 * s22 * t + 2.0 * s12 * c + 2.0 * spec.gamma * np.abs(c)


def golden_section(f, lo, hi, width=1e-10):
    """Minimize a unimodal scalar function on ``[lo, hi]``."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > width:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def oracle_p2(spec: ProblemSpec, grid_n: int = 2001, audit: bool = True) -> np.ndarray:
    """Minimizer of a 2x2 instance by scanning the off-diagonal entry.

    The reduced objective is convex in ``c``; a grid over ``[-lam, lam]``
    brackets the minimum, golden-section search refines it, and the result
    snaps to ``0`` or ``+-lam`` when within 1e-9 of those kinks.
    """
    if spec.p != 2:
        raise DimensionError(f"oracle_p2 needs p = 2, got {spec.p}")
    s11, s22 = spec.S[0, 0], spec.S[1, 1]
    if not (s11 > 0 and s22 > 0):
        raise NonPositiveDiagonal("oracle_p2 needs a positive diagonal")
    lam = spec.lam
    h = lambda c: float(reduced_objective_p2(spec, c))
    if lam == 0:
        c = 0.0
    else:
        grid = np.linspace(-lam, lam, max(int(grid_n), 3))
        i = int(np.argmin(reduced_objective_p2(spec, grid)))
        c = golden_section(h, grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)])
        candidates = [c] + [k for k in (-lam, 0.0, lam) if abs(c - k) <= 1e-9]
        c = min(candidates, key=h)
    t = float(_inner_t(s11, s22, c))
    theta = sym_matrix([[s22 * t, c], [c, s11 * t]])
    if audit:
        _audit(spec, theta, "oracle_p2")
    return theta


def oracle_diagonal(spec: ProblemSpec, audit: bool = True) -> np.ndarray:
    """``diag(1/S_ii)``, the optimum when the bound forces off-diagonals to zero."""
    if spec.lam != 0:
        raise ValueError("oracle_diagonal applies only when lambda = 0")
    diag = np.diag(spec.S)
    if np.any(diag <= 0):
        raise NonPositiveDiagonal("a zero diagonal entry makes the problem unbounded below")
    theta = sym_matrix(np.diag(1.0 / diag))
    if audit:
        _audit(spec, theta, "oracle_diagonal")
    return theta


def oracle_unconstrained(spec: ProblemSpec, audit: bool = True) -> np.ndarray:
    """``inv(S)`` for ``gamma = 0`` when the bound turns out inactive."""
    if spec.gamma != 0:
        raise ValueError("oracle_unconstrained applies only when gamma = 0")
    d, q = eig_sym(spec.S)
    if d[0] <= 0:
        raise NotPositiveDefinite("S is singular or indefinite")
    theta = sym_matrix((q / d) @ q.T, check=False)
    worst = float(np.max(np.abs(offdiag(theta))))
    if worst > spec.lam:
        raise ConstraintActive(f"max off-diagonal |inv(S)| = {worst:.4g} exceeds lambda = {spec.lam:.4g}")
    if audit:
        _audit(spec, theta, "oracle_unconstrained")
    return theta


def _audit(spec, theta, name):
    res = kkt_report(spec, theta)
    if res > AUDIT_TOL:
        raise OracleAuditFailure(f"{name}: KKT residual {res:.3e} exceeds {AUDIT_TOL:g}")


def random_p2_spec(rng: np.random.Generator):
    """Random 2x2 instance: ``S = M^T M + 0.1 I``, gamma in [0, 1], lambda in [0.01, 2]."""
    from .core import new_problem

    m = rng.standard_normal((2, 2))
    S = m.T @ m + 0.1 * np.eye(2)
    return new_problem(S, rng.uniform(0.0, 1.0), rng.uniform(0.01, 2.0))
