"""Focus semantic values and focus-operator readings by higher-order unification."""

from .errors import (Deadlock, FocusError, HouError, LimitExceeded, NoSolution, ParseError,
                     PreconditionViolated, SolverError, TermError, TypeMismatch, UnknownIdentifier)
from .focus import (ChainReading, ChainStage, Fsv, GroundEquation, PorMode, analyze_operator_chain,
                    build_ground_equation, fsv_member, interpret_also, interpret_only, por_filter,
                    solve_fsv)
from .oracle import brute_force_matchers, enumerate_ground_terms
from .soe import SoeProblem, SoeResult, build_soe_equations, resolve_soe, schedule_solve
from .term_core import *  # noqa: F401,F403
from .term_core import __all__ as _core_all
from .unification import (Problem, SearchLimits, Solution, check_order, ho_match, match_bindings,
                          observe, pre_unify, simplify, verify)

__all__ = list(_core_all) + [
    "ChainReading", "ChainStage", "Deadlock", "FocusError", "Fsv", "GroundEquation", "HouError",
    "LimitExceeded", "NoSolution", "ParseError", "PorMode", "PreconditionViolated", "Problem",
    "SearchLimits", "Solution", "SoeProblem", "SoeResult", "SolverError", "TermError", "TypeMismatch",
    "UnknownIdentifier", "analyze_operator_chain", "brute_force_matchers", "build_ground_equation",
    "build_soe_equations", "check_order", "enumerate_ground_terms", "fsv_member", "ho_match",
    "interpret_also", "interpret_only", "match_bindings", "observe", "por_filter", "pre_unify",
    "resolve_soe", "schedule_solve", "simplify", "solve_fsv", "verify",
]
