"""Closed-form proximal steps used by the ADMM iteration.

All three operators take and return symmetric float64 arrays; the two
elementwise ones leave the diagonal untouched.
"""
from __future__ import annotations

import numpy as np

from .core import symmetrize
from .linalg import apply_spectral


def expand_eigenvalue(d: np.ndarray, rho: float) -> np.ndarray:
    """Positive root of ``rho*t**2 - rho*d*t - 1 = 0`` for each entry of ``d``.

    Uses the rationalized form for negative ``d`` to avoid cancellation.
    """
    d = np.asarray(d, dtype=np.float64)
    root = np.sqrt(d * d + 4.0 / rho)
    neg = d < 0
    out = np.empty_like(d)
    out[~neg] = 0.5 * (d[~neg] + root[~neg])
    out[neg] = (2.0 / rho) / (root[neg] - d[neg])
    return out


def expand(a: np.ndarray, rho: float) -> np.ndarray:
    """argmin over T of ``-logdet(T) + rho/2 ||T - a||_F^2``.

    Always symmetric positive definite, whatever the spectrum of ``a``.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return apply_spectral(a, lambda d: expand_eigenvalue(d, rho))


def soft_threshold_offdiag(a: np.ndarray, tau: float) -> np.ndarray:
    """Shrink off-diagonal entries toward zero by ``tau``."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    a = np.asarray(a, dtype=np.float64)
    out = np.sign(a) * np.maximum(np.abs(a) - tau, 0.0)
    np.fill_diagonal(out, np.diag(a))
    return symmetrize(out)


def clip_offdiag(a: np.ndarray, lam: float) -> np.ndarray:
    """Project off-diagonal entries onto ``[-lam, lam]``."""
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    a = np.asarray(a, dtype=np.float64)
    out = np.clip(a, -lam, lam)
    np.fill_diagonal(out, np.diag(a))
    return symmetrize(out)
