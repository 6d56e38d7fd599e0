"""Consensus ADMM for the ell-infinity constrained graphical lasso.

The split variables are ``X = (theta, gamma_mat)`` and
``Y = (theta_hat, gamma_hat)``. One iteration is

    theta     <- expand(theta_hat - (S + dual_theta)/rho; rho)
    gamma_mat <- soft_threshold(gamma_hat - dual_gamma/rho; gamma/rho)
    theta_hat <- clip((theta + gamma_mat)/2 + (dual_theta + dual_gamma)/(2 rho); lam)
    gamma_hat <- theta_hat
    dual_*    <- dual_* + rho * (x_block - y_block)

Optional continuation doubles rho every ``doubling_interval`` iterations,
keeping the (unscaled) duals as they are, so the scaled duals ``dual/rho``
halve at each doubling.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterator, Optional

import numpy as np

from .core import (ProblemSpec, SolveResult, SolverConfig, SolverState, Termination,
                   initial_state, symmetrize)
from .diagnostics import diagnose, primal_residual, relative_dual_change
from .errors import NumericalBreakdown
from .prox import clip_offdiag, expand, soft_threshold_offdiag

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContinuationPolicy:
    """``rho_k = rho0 * 2**(k // doubling_interval)``; constant when the interval is None."""

    rho0: float = 1.0
    doubling_interval: Optional[int] = 20
    rho_max: float = 1e6

    @classmethod
    def from_config(cls, config: SolverConfig) -> "ContinuationPolicy":
        return cls(config.rho0, config.doubling_interval, config.rho_max)

    def rho_at(self, k: int) -> float:
        """Penalty used by the iteration with zero-based index ``k``."""
        if self.doubling_interval is None:
            return self.rho0
        return self.rho0 * 2.0 ** (k // self.doubling_interval)

    def exhausted(self, k: int) -> bool:
        return self.rho_at(k) > self.rho_max


@dataclass(frozen=True)
class StoppingRule:
    """Relative change of ``dual_theta`` below ``epsilon``.

    Unless ``literal``, the relative changes of ``dual_gamma`` and
    ``theta_hat`` must also be below ``epsilon``. The ``dual_theta`` test
    alone passes on iterates that are far from optimal: it ignores the
    gamma block entirely (whose multiplier can keep growing while
    ``gamma_mat`` sits at zero and ``gamma_hat`` at the bound), and it is
    exactly zero on the second iteration of any problem with ``gamma = 0``
    and an inactive bound, while ``theta_hat`` is still moving.
    """

    epsilon: float = 1e-8
    strict: bool = False
    literal: bool = False

    def converged(self, old: SolverState, new: SolverState) -> bool:
        if relative_dual_change(new.dual_theta, old.dual_theta) >= self.epsilon:
            return False
        if not self.literal:
            if relative_dual_change(new.dual_gamma, old.dual_gamma) >= self.epsilon:
                return False
            if relative_dual_change(new.theta_hat, old.theta_hat) >= self.epsilon:
                return False
        if self.strict:
            scale = max(1.0, float(np.linalg.norm(new.theta_hat)))
            return primal_residual(new) / scale < self.epsilon
        return True


def x_update(state: SolverState, spec: ProblemSpec):
    """Minimize the augmented Lagrangian over ``(theta, gamma_mat)``."""
    rho = state.rho
    theta = expand(symmetrize(state.theta_hat - (spec.S + state.dual_theta) / rho), rho)
    gamma_mat = soft_threshold_offdiag(symmetrize(state.gamma_hat - state.dual_gamma / rho),
                                       spec.gamma / rho)
    return theta, gamma_mat


def y_update(theta, gamma_mat, dual_theta, dual_gamma, rho, spec: ProblemSpec):
    """Minimize over ``(theta_hat, gamma_hat)`` subject to consensus and the bound."""
    center = 0.5 * (theta + gamma_mat) + (dual_theta + dual_gamma) / (2.0 * rho)
    theta_hat = clip_offdiag(symmetrize(center), spec.lam)
    return theta_hat, theta_hat


def iterate(state: SolverState, spec: ProblemSpec) -> SolverState:
    """One ADMM iteration at penalty ``state.rho``."""
    rho = state.rho
    theta, gamma_mat = x_update(state, spec)
    theta_hat, gamma_hat = y_update(theta, gamma_mat, state.dual_theta, state.dual_gamma, rho, spec)
    dual_theta = symmetrize(state.dual_theta + rho * (theta - theta_hat))
    dual_gamma = symmetrize(state.dual_gamma + rho * (gamma_mat - gamma_hat))
    return SolverState(theta=theta, gamma_mat=gamma_mat, theta_hat=theta_hat,
                       gamma_hat=gamma_hat, dual_theta=dual_theta, dual_gamma=dual_gamma,
                       rho=rho, iter=state.iter + 1)


def _check_finite(state: SolverState):
    for name in SolverState.MATRICES:
        if not np.all(np.isfinite(getattr(state, name))):
            raise NumericalBreakdown(state.iter, f"non-finite {name} at iteration {state.iter}")


def run_iterations(spec: ProblemSpec, config: SolverConfig,
                   init: Optional[np.ndarray] = None) -> Iterator[tuple]:
    """Yield ``(previous_state, state)`` for every iteration performed.

    The generator finishes by returning the :class:`Termination` reason
    (available as ``StopIteration.value``).
    """
    policy = ContinuationPolicy.from_config(config)
    rule = StoppingRule(config.epsilon, config.strict, config.literal_stop)
    state = initial_state(spec, config, init)
    for k in range(config.max_iters):
        if policy.exhausted(k):
            return Termination.RHO_CAP_REACHED
        prev = replace(state, rho=policy.rho_at(k))
        state = iterate(prev, spec)
        _check_finite(state)
        yield prev, state
        if rule.converged(prev, state):
            return Termination.CONVERGED
    return Termination.MAX_ITERS_REACHED


def solve(spec: ProblemSpec, config: SolverConfig = SolverConfig(),
          init: Optional[np.ndarray] = None) -> SolveResult:
    """Run ADMM with continuation until the stopping rule, the rho cap or ``max_iters``.

    ``init`` warm-starts all four primal blocks (duals still start at zero).
    """
    trace = [] if config.trace else None
    gen = run_iterations(spec, config, init)
    prev = state = None
    while True:
        try:
            prev, state = next(gen)
        except StopIteration as stop:
            termination = stop.value
            break
        if trace is not None:
            trace.append(diagnose(spec, state, prev.dual_theta))
    final = trace[-1] if trace else diagnose(spec, state, prev.dual_theta)
    log.info("%s after %d iterations (rho=%g, dual change %.3e)",
             termination.value, state.iter, state.rho, final.dual_change)
    return SolveResult(
        theta_star=symmetrize(state.theta_hat),
        termination=termination,
        iters_used=state.iter,
        final_diagnostics=final,
        trace=None if trace is None else tuple(trace),
        final_state=state,
    )
