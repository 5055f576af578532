from __future__ import annotations

import math
from itertools import permutations as iperms

import pytest
from hypothesis import given, strategies as st

from cwilf.errors import InvalidInputError
from cwilf.perm_core import (Permutation, PatternSet, coinv, des, descent_set, inv, lrmin,
                             match_count, match_positions, occurs, parse_perm, perm_range,
                             permutations, rank, reduce, stats, unrank)

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


@pytest.mark.parametrize("text, want", [
    ("15342", (1, 5, 3, 4, 2)),
    ("1 3 15 14 2", None),
    ("10,1,2,3,4,5,6,7,8,9", (10, 1, 2, 3, 4, 5, 6, 7, 8, 9)),
])
def test_parse_forms(text, want):
    if want is None:
        with pytest.raises(InvalidInputError):
            parse_perm(text)
    else:
        assert parse_perm(text) == want


@pytest.mark.parametrize("bad", ["1223", "0123", "12a", "1 2 4"])
def test_parse_rejects(bad):
    with pytest.raises(InvalidInputError):
        parse_perm(bad)


def test_serialization_round_trip_long():
    p = Permutation(range(12, 0, -1))
    assert str(p) == "12 11 10 9 8 7 6 5 4 3 2 1"
    assert parse_perm(str(p)) == p


def test_reduce_example():
    assert str(reduce([5, 3, 9, 6, 2])) == "32541"


@pytest.mark.parametrize("sigma, d, i, l", [
    ("938471625", 4, 24, 3),
    ("123", 0, 0, 1),
    ("321", 2, 3, 3),
    ("15342", 2, 5, 1),
])
def test_statistics(sigma, d, i, l):
    s = parse_perm(sigma)
    assert (des(s), inv(s), lrmin(s)) == (d, i, l)
    assert stats(s).coinv == math.comb(len(s), 2) - i


def test_descent_set_one_based():
    assert descent_set(parse_perm("938471625")) == {1, 3, 5, 7}


@given(perms)
def test_inv_coinv_partition_pairs(p):
    assert inv(p) + coinv(p) == math.comb(len(p), 2)
    assert des(p) == len(descent_set(p))


@given(perms)
def test_reverse_complement_statistics(p):
    p = Permutation(p)
    n = len(p)
    assert des(p.reverse()) == max(n - 1, 0) - des(p)
    assert inv(p.complement()) == coinv(p)
    assert p.inverse().inverse() == p


@given(st.lists(st.integers(-1000, 1000), unique=True, min_size=1, max_size=10))
def test_reduce_is_order_isomorphic(word):
    r = reduce(word)
    assert sorted(r) == list(range(1, len(word) + 1))
    for a in range(len(word)):
        for b in range(len(word)):
            assert (word[a] < word[b]) == (r[a] < r[b])


def test_matches_are_consecutive_windows():
    sigma = parse_perm("1324657")
    assert match_positions(sigma, "132") == [1, 4]
    assert match_count(sigma, "1324") == 2
    assert match_positions(parse_perm("1243"), "132") == [2]
    # 1423 contains 123 as a subsequence but has no 123 window
    assert occurs(parse_perm("1423"), "123")
    assert not match_positions(parse_perm("1423"), "123")


def test_pattern_set_mixed_lengths():
    ps = PatternSet.of(["1324", "123"])
    assert match_count(parse_perm("1234"), ps) == 2


@pytest.mark.parametrize("n", range(0, 7))
def test_permutations_lex_and_rank(n):
    got = list(permutations(n))
    assert got == [Permutation(p) for p in iperms(range(1, n + 1))]
    for r, p in enumerate(got):
        assert rank(p) == r and unrank(n, r) == p


def test_perm_range_slices():
    assert list(perm_range(5, 17, 40)) == list(permutations(5))[17:40]
