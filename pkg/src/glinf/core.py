"""Problem, configuration, iterate and result records.

Matrices are plain ``numpy.ndarray`` of dtype float64 that have passed
through :func:`sym_matrix`, which guarantees bit-exact symmetry and finite
entries. Records are frozen dataclasses holding read-only arrays.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from .errors import AsymmetricInput, DimensionError, NegativeParameter, NonFiniteEntry

ASYMMETRY_RTOL = 1e-12


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Average with the transpose; the result is bit-exactly symmetric."""
    return 0.5 * (a + a.T)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def sym_matrix(entries, *, check: bool = True) -> np.ndarray:
    """Validate ``entries`` as a finite square matrix and return a symmetric copy.

    With ``check`` the input must be symmetric within a relative tolerance of
    1e-12 (scaled by ``max(1, max|A_ij|)``); otherwise it is symmetrized
    unconditionally.
    """
    a = np.array(entries, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DimensionError("matrix order must be positive")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("matrix contains NaN or Inf")
    if check:
        scale = max(1.0, float(np.max(np.abs(a))))
        gap = float(np.max(np.abs(a - a.T)))
        if gap > ASYMMETRY_RTOL * scale:
            raise AsymmetricInput(f"max |A_ij - A_ji| = {gap:.3e} exceeds tolerance")
    return _frozen(symmetrize(a))


def offdiag(a: np.ndarray) -> np.ndarray:
    """Copy of ``a`` with the diagonal zeroed."""
    out = np.array(a, dtype=np.float64)
    np.fill_diagonal(out, 0.0)
    return out


def _matrix_to_dict(a: np.ndarray) -> dict:
    return {"p": int(a.shape[0]), "data": [float(x) for x in np.ravel(a)]}


def _matrix_from_dict(d: dict) -> np.ndarray:
    p = int(d["p"])
    return _frozen(np.array(d["data"], dtype=np.float64).reshape(p, p))


@dataclass(frozen=True)
class ProblemSpec:
    """Instance of the ell-infinity constrained graphical lasso.

    minimize   -logdet(T) + <S, T> + gamma * ||offdiag(T)||_1
    subject to max |offdiag(T)| <= lam
    """

    S: np.ndarray
    gamma: float
    lam: float

    @property
    def p(self) -> int:
        return self.S.shape[0]

    def to_dict(self) -> dict:
        return {"S": _matrix_to_dict(self.S), "gamma": self.gamma, "lambda": self.lam}

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        return new_problem(_matrix_from_dict(d["S"]), d["gamma"], d["lambda"])


def _check_param(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise NonFiniteEntry(f"{name} must be finite, got {value}")
    if value < 0:
        raise NegativeParameter(f"{name} must be nonnegative, got {value}")
    return value


def new_problem(S, gamma: float, lam: float) -> ProblemSpec:
    """Build a validated :class:`ProblemSpec`.

    ``S`` need not be positive semidefinite, but must be symmetric with a
    nonnegative diagonal.
    """
    S = sym_matrix(S)
    if np.any(np.diag(S) < 0):
        raise NegativeParameter("sample covariance has a negative diagonal entry")
    return ProblemSpec(S=S, gamma=_check_param("gamma", gamma), lam=_check_param("lambda", lam))


@dataclass(frozen=True)
class SolverConfig:
    """Penalty schedule, tolerance and iteration caps.

    With ``doubling_interval`` set, rho starts at ``rho0`` and doubles every
    ``doubling_interval`` iterations; the run stops as soon as rho would
    exceed ``rho_max``. The default ``None`` keeps rho fixed at ``rho0``:
    geometric growth of rho freezes the iterates before they reach the
    optimum on poorly scaled instances, so continuation is opt-in (see
    :meth:`paper`).

    ``strict`` additionally requires the relative primal residual to fall
    below ``epsilon``; ``literal_stop`` stops on the relative change of
    ``dual_theta`` alone (see :class:`glinf.solver.StoppingRule`).
    """

    rho0: float = 1.0
    doubling_interval: Optional[int] = None
    rho_max: float = 1e6
    epsilon: float = 1e-10
    max_iters: int = 10000
    trace: bool = False
    strict: bool = False
    literal_stop: bool = False

    @classmethod
    def paper(cls, **overrides) -> "SolverConfig":
        """Continuation schedule as originally published.

        rho0 = 1 doubled every 20 iterations up to 1e6, epsilon = 1e-8, and
        the stopping test on ``dual_theta`` alone.
        """
        params = dict(rho0=1.0, doubling_interval=20, rho_max=1e6, epsilon=1e-8, literal_stop=True)
        params.update(overrides)
        return cls(**params)

    def __post_init__(self):
        for name in ("rho0", "rho_max", "epsilon"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise NegativeParameter(f"{name} must be positive and finite, got {v}")
        for name in ("doubling_interval", "max_iters"):
            v = getattr(self, name)
            if v is None and name == "doubling_interval":
                continue
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise NegativeParameter(f"{name} must be a positive integer, got {v}")
        if self.rho0 > self.rho_max:
            raise NegativeParameter("rho0 must not exceed rho_max")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        return cls(**d)


@dataclass(frozen=True)
class SolverState:
    """The six ADMM iterates plus the current penalty and iteration count."""

    theta: np.ndarray
    gamma_mat: np.ndarray
    theta_hat: np.ndarray
    gamma_hat: np.ndarray
    dual_theta: np.ndarray
    dual_gamma: np.ndarray
    rho: float
    iter: int = 0

    MATRICES = ("theta", "gamma_mat", "theta_hat", "gamma_hat", "dual_theta", "dual_gamma")

    @property
    def p(self) -> int:
        return self.theta.shape[0]

    def to_dict(self) -> dict:
        d = {name: _matrix_to_dict(getattr(self, name)) for name in self.MATRICES}
        d.update(rho=self.rho, iter=self.iter)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SolverState":
        mats = {name: _matrix_from_dict(d[name]) for name in cls.MATRICES}
        return cls(**mats, rho=float(d["rho"]), iter=int(d["iter"]))


def initial_state(spec: ProblemSpec, config: SolverConfig, init: Optional[np.ndarray] = None) -> SolverState:
    """Primal blocks at the identity (or ``init``), duals at zero, rho at ``rho0``."""
    p = spec.p
    primal = _frozen(np.eye(p)) if init is None else sym_matrix(init)
    if primal.shape != (p, p):
        raise DimensionError(f"warm start has shape {primal.shape}, expected {(p, p)}")
    zero = _frozen(np.zeros((p, p)))
    return SolverState(theta=primal, gamma_mat=primal, theta_hat=primal, gamma_hat=primal,
                       dual_theta=zero, dual_gamma=zero, rho=float(config.rho0), iter=0)


class Termination(str, enum.Enum):
    CONVERGED = "Converged"
    RHO_CAP_REACHED = "RhoCapReached"
    MAX_ITERS_REACHED = "MaxItersReached"

    @property
    def exit_code(self) -> int:
        return {"Converged": 0, "RhoCapReached": 2, "MaxItersReached": 3}[self.value]


@dataclass(frozen=True)
class Diagnostics:
    """Quality measures of one iterate.

    ``objective`` and ``kkt_stationarity`` are evaluated at ``theta_hat``;
    they are ``inf`` when ``theta_hat`` is not positive definite, which can
    happen on early iterations.
    """

    objective: float
    aug_lagrangian: float
    primal_residual: float
    dual_change: float
    constraint_violation: float
    min_eigenvalue: float
    kkt_stationarity: float
    rho: float
    iter: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Diagnostics":
        return cls(**{f.name: d[f.name] for f in fields(cls)})


@dataclass(frozen=True)
class SolveResult:
    theta_star: np.ndarray
    termination: Termination
    iters_used: int
    final_diagnostics: Diagnostics
    trace: Optional[tuple] = field(default=None)
    final_state: Optional[SolverState] = field(default=None, compare=False, repr=False)

    @property
    def converged(self) -> bool:
        return self.termination is Termination.CONVERGED

    def to_dict(self) -> dict:
        return {
            "theta_star": _matrix_to_dict(self.theta_star),
            "termination": self.termination.value,
            "iters_used": self.iters_used,
            "final_diagnostics": self.final_diagnostics.to_dict(),
            "trace": None if self.trace is None else [d.to_dict() for d in self.trace],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolveResult":
        trace = d.get("trace")
        return cls(
            theta_star=_matrix_from_dict(d["theta_star"]),
            termination=Termination(d["termination"]),
            iters_used=int(d["iters_used"]),
            final_diagnostics=Diagnostics.from_dict(d["final_diagnostics"]),
            trace=None if trace is None else tuple(Diagnostics.from_dict(t) for t in trace),
        )
