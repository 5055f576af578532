from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cwilf import brute, overlap
from cwilf.errors import BudgetExceededError, InvalidInputError
from cwilf.perm_core import PatternSet, Permutation, match_positions, parse_perm, permutations
from cwilf.qpoly import MultiPoly


def oracle_mo(tau) -> bool:
    """No permutation shorter than 2j-1 carries two tau-matches."""
    j = len(tau)
    ps = PatternSet.of(tau)
    return all(brute.match_count_col(brute.perm_array(m), ps).max() < 2 for m in range(j + 1, 2 * j - 1))


def oracle_mutual(alpha, beta) -> bool:
    j = len(alpha)
    pa, pb = PatternSet.of(alpha), PatternSet.of(beta)
    for m in range(j + 1, 2 * j - 1):
        a = brute.perm_array(m)
        ha, hb = brute.match_count_col(a, pa) > 0, brute.match_count_col(a, pb) > 0
        if (ha & hb).any():
            return False
    return True


@pytest.mark.parametrize("j, count", [(3, 4), (4, 12), (5, 48), (6, 280), (7, 1864)])
def test_counts_of_minimal_overlapping(j, count):
    assert sum(overlap.is_minimal_overlapping(t).verdict for t in permutations(j)) == count


@pytest.mark.parametrize("j", [3, 4, 5])
def test_fast_agrees_with_definition(j):
    for tau in permutations(j):
        assert overlap.is_minimal_overlapping(tau).verdict == oracle_mo(tau), tau


@pytest.mark.parametrize("j", [3, 4, 5])
def test_batch_scan_agrees_with_fast(j):
    fast = {t for t in permutations(j) if overlap.is_minimal_overlapping(t).verdict}
    assert overlap.scan_non_overlapping_all(j) == fast


@pytest.mark.slow
def test_batch_scan_agrees_with_fast_length_six():
    fast = {t for t in permutations(6) if overlap.is_minimal_overlapping(t).verdict}
    assert overlap.scan_non_overlapping_all(6) == fast


@pytest.mark.parametrize("tau", ["132", "123", "1342", "14253", "1324", "2143", "12453"])
def test_scan_method_agrees(tau):
    fast = overlap.is_minimal_overlapping(tau)
    scan = overlap.is_minimal_overlapping(tau, method="scan")
    assert fast.verdict == scan.verdict
    assert fast.witness == scan.witness
    assert scan.method == "definition-scan"


@pytest.mark.parametrize("tau, witness", [("123", "1234"), ("14253", "1426375"), ("2413", None), ("1324", None)])
def test_witness_is_shortest_double_match(tau, witness):
    r = overlap.is_minimal_overlapping(tau)
    if r.verdict:
        assert r.witness is None
        return
    if witness:
        assert str(r.witness) == witness
    assert len(match_positions(r.witness, tau)) >= 2
    assert len(r.witness) < 2 * len(tau) - 1


@given(st.integers(4, 7).flatmap(lambda j: st.permutations(list(range(1, j + 1)))))
@settings(max_examples=80, deadline=None)
def test_witness_re_checkable(tau):
    tau = Permutation(tau)
    r = overlap.is_minimal_overlapping(tau)
    if not r.verdict:
        assert len(match_positions(r.witness, tau)) >= 2


@given(st.integers(4, 8).flatmap(lambda j: st.permutations(list(range(3, j + 1)))))
@settings(max_examples=60, deadline=None)
def test_start_one_end_two_is_minimal_overlapping(middle):
    # proper prefixes reduce to words starting with 1, proper suffixes to words ending with 1
    tau = Permutation([1, *middle, 2])
    assert overlap.is_minimal_overlapping(tau).verdict


@pytest.mark.parametrize("j", [4, 5])
def test_mutual_fast_agrees_with_definition(j):
    mo = sorted(t for t in permutations(j) if overlap.is_minimal_overlapping(t).verdict)
    for i, a in enumerate(mo):
        for b in mo[i + 1:]:
            got = overlap.are_mutually_minimal_overlapping(a, b).verdict
            assert got == oracle_mutual(a, b), (a, b)


@pytest.mark.parametrize("alpha, beta, verdict", [
    ("14532", "15342", True),
    ("1432", "1342", True),
    ("13542", "14352", True),
    ("193827654", "139875264", False),
])
def test_mutual_examples(alpha, beta, verdict):
    r = overlap.are_mutually_minimal_overlapping(alpha, beta)
    assert r.verdict is verdict
    if not verdict:
        w = r.witness
        assert match_positions(w, alpha) and match_positions(w, beta)
        assert str(w) == "1 3 15 14 13 6 2 12 5 11 4 10 9 8 7"


@pytest.mark.parametrize("alpha, beta", [("132", "132"), ("132", "1342"), ("123", "132")])
def test_mutual_rejects_bad_input(alpha, beta):
    with pytest.raises(InvalidInputError):
        overlap.are_mutually_minimal_overlapping(alpha, beta)


def test_short_patterns_rejected():
    with pytest.raises(InvalidInputError):
        overlap.is_minimal_overlapping("21")


def test_scan_limit_guards_long_patterns():
    with pytest.raises(BudgetExceededError):
        overlap.is_minimal_overlapping("1234567", method="scan")


def test_least_extension_respects_constraints():
    w = overlap.least_extension(5, [(0, parse_perm("132")), (2, parse_perm("132"))])
    assert match_positions(w, "132") == [1, 3]
    assert w == min(s for s in permutations(5) if match_positions(s, "132") == [1, 3])


def test_packings_of_132():
    row = overlap.enumerate_max_packings("132", 2)
    q, p = MultiPoly.var("q"), MultiPoly.var("p")
    assert row.length == 5 and row.count == 3
    assert row.poly == q**4 * p**6 + q**3 * p**7 + q**2 * p**8
    assert all(len(match_positions(s, "132")) == 2 for s in row.perms)


@pytest.mark.parametrize("tau, nmax", [("132", 4), ("1342", 2), ("1243", 2), ("1432", 2), ("13542", 1)])
def test_closed_form_matches_enumeration(tau, nmax):
    for n in range(1, nmax + 1):
        assert overlap.closed_form_mp(tau, n - 1) == overlap.enumerate_max_packings(tau, n).poly


def test_closed_form_needs_leading_one():
    with pytest.raises(InvalidInputError):
        overlap.closed_form_mp("231", 1)


def test_packings_need_minimal_overlapping():
    with pytest.raises(InvalidInputError):
        overlap.enumerate_max_packings("123", 1)


def test_mp_series_keys():
    assert sorted(overlap.mp_series_coeffs("132", 7)) == [3, 5, 7]
