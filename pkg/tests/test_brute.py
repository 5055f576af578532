from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from cwilf import brute
from cwilf.config import get_config, use_config
from cwilf.errors import BudgetExceededError
from cwilf.perm_core import (PatternSet, coinv, des, inv, lrmin, match_count, permutations)

STAT_FN = {"des": des, "inv": inv, "coinv": coinv, "lrmin": lrmin}


def naive_tally(n, names, avoid=None, count=None):
    out = Counter()
    for s in permutations(n):
        if avoid is not None and match_count(s, avoid):
            continue
        key = tuple(match_count(s, count) if k == "mch" else STAT_FN[k](s) for k in names)
        out[key] += 1
    return dict(out)


# consecutive-avoidance counts for n = 1..9 (OEIS A049774 and A080635)
@pytest.mark.parametrize("pattern, counts", [
    ("123", [1, 2, 5, 17, 70, 349, 2017, 13358, 99377]),
    ("132", [1, 2, 5, 16, 63, 296, 1623, 10176, 71793]),
])
def test_avoidance_counts(pattern, counts):
    got = [sum(brute.tally(n, ("des",), avoid=pattern).values()) for n in range(1, 10)]
    assert got == counts


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("names, avoid, count", [
    (("des", "inv"), "132", None),
    (("des", "lrmin"), ["1324", "123"], None),
    (("mch", "inv", "coinv"), None, "1342"),
    (("lrmin",), "21", None),
])
def test_vectorized_tally_matches_naive(n, names, avoid, count):
    assert brute.tally(n, names, avoid=avoid, count=count) == naive_tally(n, names, avoid, count)


def test_perm_array_is_lexicographic():
    a = brute.perm_array(4)
    assert a.shape == (24, 4)
    assert [tuple(r) for r in a.tolist()] == [tuple(p) for p in permutations(4)]


@pytest.mark.parametrize("threads", [2, 3, 5])
def test_tally_independent_of_threads(threads):
    ref = brute.tally(8, ("des", "inv"), avoid="13542")
    with use_config(get_config().with_(threads=threads)):
        assert brute.tally(8, ("des", "inv"), avoid="13542") == ref


def test_select_where_count():
    rows = brute.select(5, count="132", where_count=2)
    assert {tuple(r) for r in rows.tolist()} == {
        tuple(s) for s in permutations(5) if match_count(s, "132") == 2}
    assert np.all(brute.match_count_col(rows, PatternSet.of("132")) == 2)


def test_budget_enforced():
    with pytest.raises(BudgetExceededError):
        brute.tally(7, ("des",), budget=6)
    with use_config(get_config().with_(budget_n=4)):
        with pytest.raises(BudgetExceededError):
            brute.tally(5, ("des",))
