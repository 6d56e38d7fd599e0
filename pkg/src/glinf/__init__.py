"""ADMM solver for the graphical lasso with an element-wise bound on the precision matrix."""
from .core import (Diagnostics, ProblemSpec, SolveResult, SolverConfig, SolverState, Termination,
                   initial_state, new_problem, sym_matrix)
from .diagnostics import aug_lagrangian, kkt_report, objective
from .oracle import oracle_diagonal, oracle_p2, oracle_unconstrained
from .prox import clip_offdiag, expand, soft_threshold_offdiag
from .solver import iterate, solve

__version__ = "0.1.0"
