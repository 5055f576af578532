"""
Vectorized brute-force enumeration of S_n.

S_n is materialized once per n as an (n!, n) int8 array in lexicographic
order.  Statistics and window matches are computed column-wise, and a tally
maps each tuple of statistic values to the number of permutations carrying
it.  Rank ranges of the array are independent, so a tally can be split into
chunks, computed on a thread pool, and summed.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Sequence

import numpy as np

from cwilf import cache
from cwilf.config import get_config
from cwilf.errors import BudgetExceededError, InvalidInputError
from cwilf.perm_core import PatternSet

STATS = ("des", "inv", "coinv", "lrmin", "mch")


def check_budget(n: int, budget: int | None = None, what: str = "enumeration") -> None:
    limit = get_config().budget_n if budget is None else budget
    if n > limit:
        raise BudgetExceededError(
            f"{what} of S_{n} exceeds the budget n <= {limit} (set CWILF_BUDGET to raise it)")


@lru_cache(maxsize=4)
def perm_array(n: int) -> np.ndarray:
    """All of S_n, lexicographically, one permutation per row (values 1..n)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    if n > 12:
        raise BudgetExceededError(f"S_{n} is too large to materialize")
    base = perm_array(n - 1)
    rows = base.shape[0]
    out = np.empty((rows * n, n), dtype=np.int8)
    for v in range(1, n + 1):
        block = out[(v - 1) * rows: v * rows]
        block[:, 0] = v
        block[:, 1:] = base + (base >= v)
    out.setflags(write=False)
    return out


def rank_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def des_col(a: np.ndarray) -> np.ndarray:
    if a.shape[1] < 2:
        return np.zeros(a.shape[0], dtype=np.int64)
    return (a[:, :-1] > a[:, 1:]).sum(axis=1, dtype=np.int64)


def inv_col(a: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    out = np.zeros(a.shape[0], dtype=np.int64)
    for i in range(n - 1):
        out += (a[:, i:i + 1] > a[:, i + 1:]).sum(axis=1, dtype=np.int64)
    return out


def lrmin_col(a: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros(a.shape[0], dtype=np.int64)
    running = np.minimum.accumulate(a, axis=1)
    return 1 + (running[:, 1:] < running[:, :-1]).sum(axis=1, dtype=np.int64)


def window_hits(a: np.ndarray, chain: Sequence[int], start: int) -> np.ndarray:
    """Rows whose window at 0-based ``start`` is increasing along ``chain``."""
    hit = np.ones(a.shape[0], dtype=bool)
    for c0, c1 in zip(chain, chain[1:]):
        hit &= a[:, start + c0 - 1] < a[:, start + c1 - 1]
    return hit


def match_count_col(a: np.ndarray, patterns: PatternSet) -> np.ndarray:
    n = a.shape[1]
    out = np.zeros(a.shape[0], dtype=np.int64)
    for length, pats in patterns.by_length.items():
        chains = [tuple(pt.inverse()) for pt in pats]
        for s in range(n - length + 1):
            hit = np.zeros(a.shape[0], dtype=bool)
            for ch in chains:
                hit |= window_hits(a, ch, s)
            out += hit
    return out


def stat_col(a: np.ndarray, name: str, count: PatternSet | None = None) -> np.ndarray:
    if name == "des":
        return des_col(a)
    if name == "inv":
        return inv_col(a)
    if name == "coinv":
        n = a.shape[1]
        return n * (n - 1) // 2 - inv_col(a)
    if name == "lrmin":
        return lrmin_col(a)
    if name == "mch":
        if count is None:
            raise InvalidInputError("statistic 'mch' needs a pattern set to count")
        return match_count_col(a, count)
    raise InvalidInputError(f"unknown statistic {name!r}; expected one of {STATS}")


def _tally_chunk(a: np.ndarray, names: tuple[str, ...], avoid: PatternSet | None,
                 count: PatternSet | None) -> Counter:
    if avoid is not None and a.shape[1] > 0:
        a = a[match_count_col(a, avoid) == 0]
    if a.shape[0] == 0:
        return Counter()
    if not names:
        return Counter({(): a.shape[0]})
    cols = [stat_col(a, nm, count) for nm in names]
    key = np.zeros(a.shape[0], dtype=np.int64)
    radices = []
    for c in cols:
        r = int(c.max()) + 1
        radices.append(r)
        key = key * r + c
    uniq, counts = np.unique(key, return_counts=True)
    out = Counter()
    for k, m in zip(uniq.tolist(), counts.tolist()):
        vals = []
        for r in reversed(radices):
            k, v = divmod(k, r)
            vals.append(v)
        out[tuple(reversed(vals))] += m
    return out


def tally(n: int, names: Sequence[str], avoid=None, count=None, *,
          budget: int | None = None, threads: int | None = None) -> dict[tuple[int, ...], int]:
    """Count permutations of S_n by the tuple of statistics ``names``.

    ``avoid`` restricts to permutations with no consecutive match of that
    pattern set; ``count`` is the pattern set whose matches ``mch`` counts.
    """
    check_budget(n, budget)
    names = tuple(names)
    avoid_ps = PatternSet.of(avoid) if avoid is not None else None
    count_ps = PatternSet.of(count) if count is not None else None
    params = {"n": n, "stats": list(names),
              "avoid": avoid_ps.key() if avoid_ps else None,
              "count": count_ps.key() if count_ps else None}

    def compute():
        a = perm_array(n)
        nthreads = threads or get_config().threads
        ranges = rank_ranges(a.shape[0], nthreads * 4 if nthreads > 1 else 1)
        total = Counter()
        if nthreads > 1 and len(ranges) > 1:
            with ThreadPoolExecutor(max_workers=nthreads) as pool:
                parts = pool.map(lambda r: _tally_chunk(a[r[0]:r[1]], names, avoid_ps, count_ps),
                                 ranges)
                for part in parts:
                    total.update(part)
        else:
            for lo, hi in ranges:
                total.update(_tally_chunk(a[lo:hi], names, avoid_ps, count_ps))
        return [[list(k), v] for k, v in sorted(total.items())]

    rows = cache.cached("tally", params, compute)
    return {tuple(k): v for k, v in rows}


def select(n: int, avoid=None, count=None, where_count: int | None = None,
           *, budget: int | None = None) -> np.ndarray:
    """Rows of S_n avoiding ``avoid`` and, if given, with exactly
    ``where_count`` matches of ``count``."""
    check_budget(n, budget)
    a = perm_array(n)
    mask = np.ones(a.shape[0], dtype=bool)
    if avoid is not None:
        mask &= match_count_col(a, PatternSet.of(avoid)) == 0
    if where_count is not None:
        mask &= match_count_col(a, PatternSet.of(count)) == where_count
    return a[mask]
