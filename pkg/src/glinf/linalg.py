"""Symmetric eigendecomposition and spectral functions of symmetric matrices."""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .core import symmetrize
from .errors import ConvergenceFailure, NonFiniteEntry

_SIGN_EPS = 1e-14


class EigenPair(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_sym(a: np.ndarray) -> EigenPair:
    """Eigendecomposition ``a = Q diag(d) Q^T`` with ``d`` ascending.

    Each column of ``Q`` is flipped so that its first component of magnitude
    above 1e-14 is positive, which makes the output deterministic.
    """
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("cannot decompose a matrix with non-finite entries")
    try:
        d, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    lead = np.argmax(np.abs(q) > _SIGN_EPS, axis=0)
    signs = np.sign(q[lead, np.arange(q.shape[1])])
    signs[signs == 0] = 1.0
    return EigenPair(d, q * signs)


def apply_spectral(a: np.ndarray, phi: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Return ``Q diag(phi(d)) Q^T``; ``phi`` acts on the eigenvalue vector."""
    d, q = eig_sym(a)
    return symmetrize((q * phi(d)) @ q.T)


def min_eigenvalue(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(a)[0])


def logdet_pd(a: np.ndarray) -> float:
    """Sum of log-eigenvalues, or ``None`` when ``a`` is not positive definite."""
    d = np.linalg.eigvalsh(a)
    if d[0] <= 0:
        return None
    return float(np.sum(np.log(d)))
