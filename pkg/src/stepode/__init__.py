"""Closed-form particular solutions of linear ODEs whose coefficients are step functions."""

from .kernels import BACKEND
from .solver import (
    ODEProblem,
    PiecewiseSolution,
    SolvabilityError,
    SolvabilityReport,
    ValidationError,
    apply_operator_constant,
    apply_operator_piecewise,
    build_psi_S,
    check_solvability,
    omega,
    sigma,
    solve_constant,
    solve_piecewise,
)
from .stepfn import Partition, StepFunction, common_refinement, constant, discretize, eval_step, make_step
from .trig import TrigSeries, analyze, analyze_samples, combine, differentiate, eval_series
from .verify import convergence_study, fd_residual_check, oracle_order2, residual_grid

__version__ = "0.1.0"
