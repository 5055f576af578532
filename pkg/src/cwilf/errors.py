"""Exception types shared by every module.

The CLI maps these onto exit codes: InvalidInputError -> 2,
BudgetExceededError -> 3, ConsistencyError -> 1.
"""


class InvalidInputError(ValueError):
    """Malformed permutation, pattern set, or violated hypothesis."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured size limit."""


class ConsistencyError(RuntimeError):
    """An exactness guarantee failed (non-integral coefficient, overlap, ...)."""
