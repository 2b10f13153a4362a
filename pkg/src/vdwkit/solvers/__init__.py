from .naive import naive_solve
from .search import (
    SOLVER_VERSION,
    BudgetExhausted,
    ComputedValue,
    SearchBudget,
    solve,
    solve_chi,
    solve_r,
    witness_search,
)

__all__ = [
    "SOLVER_VERSION",
    "BudgetExhausted",
    "ComputedValue",
    "SearchBudget",
    "naive_solve",
    "solve",
    "solve_chi",
    "solve_r",
    "witness_search",
]
