"""
Minimal overlapping patterns and maximum packings.

tau in S_j is minimal overlapping when the shortest permutation with two
tau-matches has length 2j-1, i.e. two matches can share at most one cell.
Two checks are provided: a definitional scan of S_i for i <= 2j-2, and a fast
criterion comparing reduced prefixes and suffixes.  Tests require the two to
agree on all of S_j for j <= 6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cwilf import brute
from cwilf.config import get_config
from cwilf.errors import BudgetExceededError, InvalidInputError
from cwilf.perm_core import Permutation, PatternSet, coinv, inv, parse_perm, reduce
from cwilf.qpoly import MultiPoly, pq_binomial

METHODS = ("fast", "scan")


@dataclass(frozen=True)
class OverlapReport:
    patterns: tuple[Permutation, ...]
    verdict: bool
    witness: Permutation | None = None
    method: str = "prefix-suffix-criterion"

    def to_json(self) -> dict:
        return {
            "patterns": [str(p) for p in self.patterns],
            "verdict": self.verdict,
            "witness": str(self.witness) if self.witness is not None else None,
            "method": self.method,
        }


@dataclass(frozen=True)
class PackingRow:
    n: int
    length: int
    perms: tuple[Permutation, ...]
    poly: MultiPoly

    @property
    def count(self) -> int:
        return len(self.perms)

    def to_json(self) -> dict:
        return {"n": self.n, "length": self.length, "count": self.count,
                "mp": str(self.poly), "perms": [str(s) for s in self.perms]}


@dataclass
class PackingTable:
    pattern: Permutation
    rows: list[PackingRow] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"pattern": str(self.pattern), "rows": [r.to_json() for r in self.rows]}


def _check_length(tau: Permutation) -> int:
    j = len(tau)
    if j < 3:
        raise InvalidInputError(f"minimal overlap is only defined for patterns of length >= 3, got {tau}")
    return j


def _scan_guard(j: int) -> None:
    limit = get_config().scan_limit
    if math.factorial(2 * j - 2) > limit:
        raise BudgetExceededError(
            f"definitional scan of S_{2 * j - 2} exceeds the limit of {limit} permutations")


# -- witnesses from overlap constraints ----------------------------------------

def least_extension(length: int, placed: Sequence[tuple[int, Permutation]]) -> Permutation:
    """Lexicographically least sigma in S_length such that each (start, tau)
    in ``placed`` is a match at that 0-based start.

    The constraints form a DAG (edge u -> v when sigma_u < sigma_v is forced);
    labelling from the top down, each time giving the largest free label to the
    highest-index vertex with no unlabelled successors, yields the least one.
    """
    succ: list[set[int]] = [set() for _ in range(length)]
    for start, tau in placed:
        chain = tau.inverse()
        for a, b in zip(chain, chain[1:]):
            succ[start + a - 1].add(start + b - 1)
    remaining = [len(s) for s in succ]
    pred: list[list[int]] = [[] for _ in range(length)]
    for u, vs in enumerate(succ):
        for v in vs:
            pred[v].append(u)
    out = [0] * length
    free = {v for v in range(length) if remaining[v] == 0}
    for label in range(length, 0, -1):
        if not free:
            raise InvalidInputError("overlap constraints are inconsistent")
        v = max(free)
        free.remove(v)
        out[v] = label
        for u in pred[v]:
            remaining[u] -= 1
            if remaining[u] == 0:
                free.add(u)
    return Permutation(out)


# -- single pattern --------------------------------------------------------------

def _fast_overlap(tau: Permutation) -> OverlapReport:
    j = len(tau)
    # the largest shared block gives the shortest double match
    for i in range(j - 1, 1, -1):
        if reduce(tau[:i]) == reduce(tau[j - i:]):
            w = least_extension(2 * j - i, [(0, tau), (j - i, tau)])
            return OverlapReport((tau,), False, w, "prefix-suffix-criterion")
    return OverlapReport((tau,), True, None, "prefix-suffix-criterion")


def _scan_overlap(tau: Permutation) -> OverlapReport:
    j = len(tau)
    _scan_guard(j)
    ps = PatternSet.of(tau)
    for n in range(j + 1, 2 * j - 1):
        a = brute.perm_array(n)
        hits = a[brute.match_count_col(a, ps) >= 2]
        if hits.shape[0]:
            return OverlapReport((tau,), False, Permutation(hits[0].tolist()), "definition-scan")
    return OverlapReport((tau,), True, None, "definition-scan")


def is_minimal_overlapping(tau, method: str = "fast") -> OverlapReport:
    tau = parse_perm(tau)
    _check_length(tau)
    if method == "fast":
        return _fast_overlap(tau)
    if method == "scan":
        return _scan_overlap(tau)
    raise InvalidInputError(f"unknown method {method!r}; expected {METHODS}")


# -- pairs -----------------------------------------------------------------------

def _fast_mutual(alpha: Permutation, beta: Permutation) -> OverlapReport:
    j = len(alpha)
    for i in range(j - 1, 1, -1):
        for first, second in ((alpha, beta), (beta, alpha)):
            if reduce(first[j - i:]) == reduce(second[:i]):
                w = least_extension(2 * j - i, [(0, first), (j - i, second)])
                return OverlapReport((alpha, beta), False, w, "prefix-suffix-criterion")
    return OverlapReport((alpha, beta), True, None, "prefix-suffix-criterion")


def _scan_mutual(alpha: Permutation, beta: Permutation) -> OverlapReport:
    j = len(alpha)
    _scan_guard(j)
    pa, pb = PatternSet.of(alpha), PatternSet.of(beta)
    for n in range(j + 1, 2 * j - 1):
        a = brute.perm_array(n)
        both = (brute.match_count_col(a, pa) > 0) & (brute.match_count_col(a, pb) > 0)
        hits = a[both]
        if hits.shape[0]:
            return OverlapReport((alpha, beta), False, Permutation(hits[0].tolist()), "definition-scan")
    return OverlapReport((alpha, beta), True, None, "definition-scan")


def are_mutually_minimal_overlapping(alpha, beta, method: str = "fast") -> OverlapReport:
    """Whether an alpha-match and a beta-match can share at most one cell.

    Both patterns must be individually minimal overlapping and distinct.
    """
    alpha, beta = parse_perm(alpha), parse_perm(beta)
    j = _check_length(alpha)
    if len(beta) != j:
        raise InvalidInputError(f"patterns must have equal length, got {alpha} and {beta}")
    if alpha == beta:
        raise InvalidInputError("mutual overlap needs two distinct patterns")
    for tau in (alpha, beta):
        if not _fast_overlap(tau).verdict:
            raise InvalidInputError(f"{tau} is not minimal overlapping")
    if method == "fast":
        return _fast_mutual(alpha, beta)
    if method == "scan":
        return _scan_mutual(alpha, beta)
    raise InvalidInputError(f"unknown method {method!r}; expected {METHODS}")


# -- batch scans for cross-validation ---------------------------------------------

def _window_codes(a: np.ndarray, j: int) -> np.ndarray:
    """Lexicographic rank in S_j of the reduced window at each start.

    Returns an array of shape (rows, n - j + 1).
    """
    n = a.shape[1]
    out = np.zeros((a.shape[0], n - j + 1), dtype=np.int64)
    for s in range(n - j + 1):
        w = a[:, s:s + j]
        code = np.zeros(a.shape[0], dtype=np.int64)
        for k in range(j - 1):
            smaller = (w[:, k + 1:] < w[:, k:k + 1]).sum(axis=1, dtype=np.int64)
            code += smaller * math.factorial(j - 1 - k)
        out[:, s] = code
    return out


def scan_non_overlapping_all(j: int) -> set[Permutation]:
    """Every tau in S_j that is minimal overlapping, by scanning S_{2j-2} once.

    A permutation of length below 2j-2 with two matches extends to one of
    length 2j-2 by appending new maxima, so one length suffices.
    """
    _check_length(Permutation(range(1, j + 1)))
    _scan_guard(j)
    codes = _window_codes(brute.perm_array(2 * j - 2), j)
    bad: set[int] = set()
    w = codes.shape[1]
    for s in range(w):
        for t in range(s + 1, w):
            same = codes[:, s] == codes[:, t]
            bad.update(np.unique(codes[same, s]).tolist())
    from cwilf.perm_core import unrank
    return {unrank(j, r) for r in range(math.factorial(j)) if r not in bad}


def scan_mutual_pairs(j: int) -> set[tuple[int, int]]:
    """Rank pairs (r1, r2), r1 != r2, of S_j whose matches can share two or
    more cells, from one scan of S_{2j-2}."""
    _scan_guard(j)
    codes = _window_codes(brute.perm_array(2 * j - 2), j)
    f = math.factorial(j)
    w = codes.shape[1]
    clash: set[tuple[int, int]] = set()
    for s in range(w):
        for t in range(w):
            if s != t:
                key = np.unique(codes[:, s] * f + codes[:, t])
                for k in key.tolist():
                    r1, r2 = divmod(k, f)
                    if r1 != r2:
                        clash.add((r1, r2))
    return clash


# -- maximum packings -------------------------------------------------------------

def _require_mo(tau: Permutation) -> None:
    if not _fast_overlap(tau).verdict:
        raise InvalidInputError(f"{tau} is not minimal overlapping")


def enumerate_max_packings(tau, n: int, *, budget: int | None = None) -> PackingRow:
    """All sigma of length n(j-1)+1 with exactly n tau-matches, with
    mp(p,q) = sum of q^inv p^coinv over them."""
    tau = parse_perm(tau)
    j = _check_length(tau)
    _require_mo(tau)
    if n < 1:
        raise InvalidInputError("number of matches must be >= 1")
    length = n * (j - 1) + 1
    brute.check_budget(length, budget, "maximum packing enumeration")
    rows = brute.select(length, count=PatternSet.of(tau), where_count=n, budget=budget)
    if rows.shape[0] == 0:
        return PackingRow(n, length, (), MultiPoly.const(0))
    inv_c = brute.inv_col(rows)
    total = length * (length - 1) // 2
    keys, counts = np.unique(inv_c, return_counts=True)
    poly = MultiPoly.from_terms(((k, total - k, 0, 0, 0), c)
                                for k, c in zip(keys.tolist(), counts.tolist()))
    perms = tuple(Permutation(r) for r in rows.tolist())
    return PackingRow(n, length, perms, poly)


def packing_table(tau, nmax: int, *, budget: int | None = None) -> PackingTable:
    tau = parse_perm(tau)
    return PackingTable(tau, [enumerate_max_packings(tau, n, budget=budget)
                              for n in range(1, nmax + 1)])


def closed_form_mp(tau, n: int) -> MultiPoly:
    """mp(p,q) for n+1 matches of a minimal overlapping tau with tau_1 = 1:

        (p^coinv q^inv)^(n+1) p^((s-1)(j-1)C(n+1,2)) prod_{i=1}^{n+1} [i(j-1)+1-s choose j-s]_{p,q}
    """
    tau = parse_perm(tau)
    j = _check_length(tau)
    if tau[0] != 1:
        raise InvalidInputError(f"closed form needs a pattern starting with 1, got {tau}")
    _require_mo(tau)
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    s = tau[-1]
    out = MultiPoly.monomial(1, p=(n + 1) * coinv(tau) + (s - 1) * (j - 1) * math.comb(n + 1, 2),
                             q=(n + 1) * inv(tau))
    for i in range(1, n + 2):
        out = out * pq_binomial(i * (j - 1) + 1 - s, j - s)
    return out


def mp_series_coeffs(tau, N: int) -> dict[int, MultiPoly]:
    """{m: mp for the maximum packing of length m} for m = n(j-1)+1 <= N,
    from the closed form."""
    tau = parse_perm(tau)
    j = len(tau)
    out = {}
    n = 0
    while (n + 1) * (j - 1) + 1 <= N:
        out[(n + 1) * (j - 1) + 1] = closed_form_mp(tau, n)
        n += 1
    return out


__all__ = [
    "OverlapReport", "PackingRow", "PackingTable", "is_minimal_overlapping",
    "are_mutually_minimal_overlapping", "least_extension", "scan_non_overlapping_all",
    "scan_mutual_pairs", "enumerate_max_packings", "packing_table", "closed_form_mp",
    "mp_series_coeffs",
]
