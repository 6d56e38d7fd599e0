"""Objective, augmented Lagrangian, residuals and KKT audit."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .core import Diagnostics, ProblemSpec, SolverState, offdiag
from .errors import NotPositiveDefinite
from .linalg import eig_sym, logdet_pd

# Value of an indicator function outside its set.
INDICATOR_INF = math.inf
INDICATOR_TOL = 1e-9

__all__ = [
    "Diagnostics", "INDICATOR_INF", "objective", "smooth_part", "aug_lagrangian",
    "kkt_report", "constraint_violation", "primal_residual", "relative_dual_change",
    "diagnose",
]


def _neg_logdet(theta: np.ndarray) -> float:
    ld = logdet_pd(theta)
    if ld is None:
        raise NotPositiveDefinite("matrix has a nonpositive eigenvalue")
    return -ld


def l1_offdiag(a: np.ndarray) -> float:
    return float(np.sum(np.abs(offdiag(a))))


def objective(spec: ProblemSpec, theta: np.ndarray) -> float:
    """``-logdet(theta) + <S, theta> + gamma * ||offdiag(theta)||_1``."""
    return _neg_logdet(theta) + float(np.sum(spec.S * theta)) + spec.gamma * l1_offdiag(theta)


def smooth_part(spec: ProblemSpec, theta: np.ndarray, gamma_mat: np.ndarray) -> float:
    """The X-block function: log-likelihood term on ``theta``, penalty on ``gamma_mat``."""
    return _neg_logdet(theta) + float(np.sum(spec.S * theta)) + spec.gamma * l1_offdiag(gamma_mat)


def indicator_y(spec: ProblemSpec, theta_hat: np.ndarray, gamma_hat: np.ndarray) -> float:
    """Zero if ``theta_hat`` is feasible and equals ``gamma_hat``, else ``INDICATOR_INF``."""
    if constraint_violation(spec, theta_hat) > INDICATOR_TOL:
        return INDICATOR_INF
    if float(np.max(np.abs(theta_hat - gamma_hat))) > INDICATOR_TOL:
        return INDICATOR_INF
    return 0.0


def aug_lagrangian(spec: ProblemSpec, state: SolverState, rho: Optional[float] = None) -> float:
    """Augmented Lagrangian of the split problem at ``state``.

    ``rho`` defaults to ``state.rho``.
    """
    rho = state.rho if rho is None else rho
    g = indicator_y(spec, state.theta_hat, state.gamma_hat)
    if g == INDICATOR_INF:
        return INDICATOR_INF
    r_theta = state.theta - state.theta_hat
    r_gamma = state.gamma_mat - state.gamma_hat
    coupling = float(np.sum(state.dual_theta * r_theta) + np.sum(state.dual_gamma * r_gamma))
    penalty = 0.5 * rho * float(np.sum(r_theta**2) + np.sum(r_gamma**2))
    return smooth_part(spec, state.theta, state.gamma_mat) + g + coupling + penalty


def constraint_violation(spec: ProblemSpec, theta: np.ndarray) -> float:
    return max(0.0, float(np.max(np.abs(offdiag(theta)))) - spec.lam)


def primal_residual(state: SolverState) -> float:
    return float(np.linalg.norm(state.theta - state.theta_hat)
                 + np.linalg.norm(state.gamma_mat - state.gamma_hat))


def relative_dual_change(new_dual: np.ndarray, old_dual: np.ndarray) -> float:
    return float(np.linalg.norm(new_dual - old_dual) / max(1.0, np.linalg.norm(old_dual)))


def default_kkt_tol(spec: ProblemSpec) -> float:
    return 1e-7 * max(1.0, spec.lam)


def kkt_report(spec: ProblemSpec, theta: np.ndarray, tol: Optional[float] = None) -> float:
    """Largest first-order optimality violation at ``theta``.

    With ``G = S - inv(theta)`` each off-diagonal entry is classified as zero
    (``|theta_ij| <= tol``), at the bound (``lam - |theta_ij| <= tol``) or
    interior, and contributes

    * zero:     ``max(0, |G_ij| - gamma)``
    * bound:    ``max(0, s * (G_ij + gamma * s))`` with ``s = sign(theta_ij)``,
      i.e. the bound's multiplier must be nonnegative
    * interior: ``|G_ij + gamma * s|``

    An entry that is both zero and at the bound (``lam <= 2 tol``) is
    unconstrained in sign and contributes nothing. Diagonal entries
    contribute ``|G_ii|``.
    """
    tol = default_kkt_tol(spec) if tol is None else tol
    d, q = eig_sym(theta)
    if d[0] <= 0:
        raise NotPositiveDefinite("KKT audit needs a positive definite matrix")
    grad = spec.S - (q / d) @ q.T
    mag = np.abs(theta)
    s = np.sign(theta)
    is_zero = mag <= tol
    at_bound = (spec.lam - mag <= tol) & ~is_zero
    interior = ~is_zero & ~at_bound
    shifted = grad + spec.gamma * s
    res = np.zeros_like(grad)
    res[interior] = np.abs(shifted[interior])
    res[is_zero] = np.maximum(0.0, np.abs(grad[is_zero]) - spec.gamma)
    res[at_bound] = np.maximum(0.0, s[at_bound] * shifted[at_bound])
    if spec.lam <= 2 * tol:
        res[is_zero] = 0.0
    np.fill_diagonal(res, np.abs(np.diag(grad)))
    return float(np.max(res))


def diagnose(spec: ProblemSpec, state: SolverState, prev_dual_theta: np.ndarray) -> Diagnostics:
    """Diagnostics of ``state``, the iterate produced from duals ``prev_dual_theta``."""
    theta_hat = state.theta_hat
    lam_min = float(np.linalg.eigvalsh(theta_hat)[0])
    if lam_min > 0:
        obj = objective(spec, theta_hat)
        kkt = kkt_report(spec, theta_hat)
    else:
        obj = kkt = math.inf
    return Diagnostics(
        objective=obj,
        aug_lagrangian=aug_lagrangian(spec, state),
        primal_residual=primal_residual(state),
        dual_change=relative_dual_change(state.dual_theta, prev_dual_theta),
        constraint_violation=constraint_violation(spec, theta_hat),
        min_eigenvalue=lam_min,
        kkt_stationarity=kkt,
        rho=float(state.rho),
        iter=int(state.iter),
    )
