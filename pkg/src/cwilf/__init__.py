"""Exact enumeration and generating-function tools for consecutive
pattern avoidance in permutations, refined by descents, inversions and
left-to-right minima."""

from cwilf.errors import BudgetExceededError, ConsistencyError, InvalidInputError
from cwilf.perm_core import Permutation, parse_perm, reduce, stats
from cwilf.qpoly import MultiPoly

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ConsistencyError",
    "InvalidInputError",
    "MultiPoly",
    "Permutation",
    "parse_perm",
    "reduce",
    "stats",
]
