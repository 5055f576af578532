from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cwilf import qseries, tabloids
from cwilf.errors import BudgetExceededError, InvalidInputError
from cwilf.perm_core import Permutation, PatternSet, permutations
from cwilf.qpoly import MultiPoly
from cwilf.tabloids import BrickTabloid, FilledTabloid

GAMMAS = [["1324"], ["13542"], ["14532", "15342"], ["14253"]]


def naive_objects(patterns, n):
    ps = PatternSet.of(patterns)
    out = []
    for bricks in tabloids.compositions(n):
        t = BrickTabloid(bricks)
        for s in permutations(n):
            inside = any(t.starts[i] <= a and b <= t.ends[i]
                         for a, b in ps.match_intervals(s) for i in range(len(bricks)))
            if not inside:
                out.append(FilledTabloid(t, s))
    return out


def test_worked_example_weight():
    o = tabloids.from_blocks(
        (9, 3, 5, 2),
        [{2, 5, 6, 9, 11, 15, 16, 17, 19}, {7, 8, 14}, {1, 3, 10, 13, 18}, {4, 12}],
        ["124653798", "132", "51243", "21"])
    assert o.weight == MultiPoly.monomial(1, q=84, z=11)
    assert o.sign == 1
    assert o.is_valid(["1324", "1423", "12345"])


def test_single_increasing_brick():
    o = FilledTabloid(BrickTabloid((4,)), Permutation("1234"))
    assert o.sign == -1 and o.weight == MultiPoly.var("z")
    assert o.labels() == ["", "", "", "-z"]


@pytest.mark.parametrize("lam, n, count", [((1, 1, 2, 2), 6, 6), ((3,), 3, 1), ((1, 2), 3, 2), ((1, 1, 1), 3, 1)])
def test_count_brick_tabloids(lam, n, count):
    assert tabloids.count_brick_tabloids(lam, n) == count


def test_count_brick_tabloids_checks_sum():
    with pytest.raises(InvalidInputError):
        tabloids.count_brick_tabloids((2, 2), 5)


def test_compositions():
    assert tabloids.compositions(3) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert len(tabloids.compositions(7)) == 2 ** 6


@pytest.mark.parametrize("gamma", GAMMAS, ids=lambda g: ",".join(g))
@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_agrees_with_naive(gamma, n):
    got = sorted((o.bricks, o.sigma) for o in tabloids.enumerate_objects(gamma, n))
    want = sorted((o.bricks, o.sigma) for o in naive_objects(gamma, n))
    assert got == want


@pytest.mark.parametrize("gamma", GAMMAS, ids=lambda g: ",".join(g))
@pytest.mark.parametrize("n", range(1, 7))
def test_involution_properties(gamma, n):
    r = tabloids.verify_involution(gamma, n)
    assert r.ok
    iu = qseries.iu_from_brute(gamma, n)
    assert r.total == r.fixed_total == iu[n]


@pytest.mark.slow
@pytest.mark.parametrize("gamma", GAMMAS, ids=lambda g: ",".join(g))
def test_involution_properties_n7(gamma):
    r = tabloids.verify_involution(gamma, 7)
    assert r.ok and r.fixed_total == qseries.iu_from_brute(gamma, 7)[7]


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(
    st.sampled_from(tabloids.compositions(n)), st.permutations(list(range(1, n + 1))))))
@settings(max_examples=150, deadline=None)
def test_involution_pairs_objects(data):
    bricks, sigma = data
    o = FilledTabloid(BrickTabloid(bricks), Permutation(sigma))
    gamma = ["1324"]
    if not o.is_valid(gamma):
        return
    img = tabloids.involution_j(gamma, o)
    assert img.is_valid(gamma)
    assert tabloids.involution_j(gamma, img) == o
    if img != o:
        assert img.sign == -o.sign and img.weight == o.weight


def test_first_brick_z_label_splits_there():
    o = FilledTabloid(BrickTabloid((3, 1)), Permutation("2314"))
    img = tabloids.involution_j(["1324"], o)
    assert img.bricks == (2, 1, 1)


def test_fixed_points_satisfy_lemma_checks():
    for o in tabloids.fixed_points(["13542"], 6):
        assert tabloids.increasing_where_unforced(o)
        assert tabloids.descent_boundaries_covered(["13542"], o)


def test_non_increasing_firsts_exist():
    o = tabloids.find_fixed_point(["15342"], 7, lambda x: not tabloids.firsts_increasing(x))
    assert o is not None
    assert tabloids.involution_j(["15342"], o) == o
    assert not tabloids.firsts_increasing(o)


@pytest.mark.parametrize("gamma, qualifies", [(["1324"], True), (["14253"], True), (["13542"], False), (["15342"], False)])
def test_descent_bottom_hypothesis(gamma, qualifies):
    assert tabloids.descent_bottoms_qualify(gamma) is qualifies


def test_object_budget():
    with pytest.raises(BudgetExceededError):
        next(tabloids.enumerate_objects(["1324"], 9))
    assert tabloids.object_count_bound(3) == 24
