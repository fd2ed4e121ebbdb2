"""Optimal contracts robust to approximately best-responding agents."""
from .baseline import BoundsReport, bounds, opt_nonrobust, shift_contract, social_welfare
from .generators import gen_random, gen_tight_lb, gen_tight_ub
from .learning import LearnConfig, LearnRun, UCB1, run_ucb1
from .lp import LinearProgram, LpResult, LpStatus, solve_lp
from .model import (
    Instance,
    Membership,
    TypedInstance,
    ValidationReport,
    delta_best_responses,
    psi,
    validate_instance,
    validate_typed,
    worst_delta_response,
)
from .oracle import GridSpec, grid_psi_max
from .robust import RobustSolution, build_subproblem, solve_robust

__all__ = [
    "BoundsReport", "GridSpec", "Instance", "LearnConfig", "LearnRun", "LinearProgram",
    "LpResult", "LpStatus", "Membership", "RobustSolution", "TypedInstance", "UCB1",
    "ValidationReport", "bounds", "build_subproblem", "delta_best_responses", "gen_random",
    "gen_tight_lb", "gen_tight_ub", "grid_psi_max", "opt_nonrobust", "psi", "run_ucb1",
    "shift_contract", "social_welfare", "solve_lp", "solve_robust", "validate_instance",
    "validate_typed", "worst_delta_response",
]
