"""Node budgets for the exact (exponential) searches.

Every solver that enumerates an exponential space takes a budget, counted in
search nodes, so callers get either an exact answer or an explicit partial
outcome instead of an unbounded hang.  The default can be overridden with the
``UNIFOLIATE_BUDGET`` environment variable.
"""

from __future__ import annotations

import os

DEFAULT_NODE_BUDGET = 2_000_000


class BudgetExceededError(RuntimeError):
    """Raised by operations whose contract is to fail hard on exhaustion."""


def default_budget() -> int:
    raw = os.environ.get("UNIFOLIATE_BUDGET")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"UNIFOLIATE_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("UNIFOLIATE_BUDGET must be positive")
    return value


class NodeBudget:
    """Mutable countdown shared across one search invocation."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = None):
        self.limit = default_budget() if limit is None else int(limit)
        self.used = 0

    def tick(self, n: int = 1) -> bool:
        """Consume ``n`` nodes; return False once the budget is exhausted."""
        self.used += n
        return self.used <= self.limit

    @property
    def exhausted(self) -> bool:
        return self.used > self.limit


def as_budget(budget: int | NodeBudget | None) -> NodeBudget:
    if isinstance(budget, NodeBudget):
        return budget
    return NodeBudget(budget)
