"""Parametric integer solutions of  sum a_i x_i^4 = sum a_i y_i^4  (n >= 3)."""
from .construction import (
    DegenerateConstructionError,
    GeneralParams,
    IntegerSolution,
    N3SpecialParams,
    PreconditionError,
    ProblemSpec,
    RationalSolution,
    nontriviality_check,
    normalize_params,
    solve_general,
    solve_n3_special,
    to_primitive,
    verify_equation,
)
from .search import SearchConfig, SolutionRecord, run_search, search_minimal

__version__ = "0.1.0"

__all__ = [
    "DegenerateConstructionError",
    "GeneralParams",
    "IntegerSolution",
    "N3SpecialParams",
    "PreconditionError",
    "ProblemSpec",
    "RationalSolution",
    "SearchConfig",
    "SolutionRecord",
    "nontriviality_check",
    "normalize_params",
    "run_search",
    "search_minimal",
    "solve_general",
    "solve_n3_special",
    "to_primitive",
    "verify_equation",
]
