from __future__ import annotations

import pytest

from cwilf import equivalence
from cwilf.errors import InvalidInputError
from cwilf.perm_core import Permutation, des, inv, lrmin, match_positions, permutations


def test_des_class_of_four():
    r = equivalence.classify(["13542", "14352", "14532", "15342"], "des", 7)
    assert len(r.classes) == 1
    assert r.to_json()["claim"] == "equivalent up to n = 7"


def test_des_inv_splits_in_two():
    r = equivalence.classify(["13542", "14352", "14532", "15342"], ("des", "inv"), 7)
    assert [[str(p) for p in c] for c in r.classes] == [["13542", "14352"], ["14532", "15342"]]
    assert r.distinguishing[(Permutation("13542"), Permutation("14532"))] == 5
    assert r.same_class("14532", "15342") and not r.same_class("13542", "15342")


def test_profile_vector_matches_direct_sum():
    vec = equivalence.profile_vector("132", ("des", "lrmin"), 5)
    direct = {}
    for s in permutations(5):
        if not match_positions(s, "132"):
            key = (des(s), lrmin(s))
            direct[key] = direct.get(key, 0) + 1
    assert {(e[2], e[3]): c for e, c in vec[5].terms()} == direct


@pytest.mark.parametrize("profile", ["", "des,foo", ["mch"]])
def test_bad_profile(profile):
    with pytest.raises(InvalidInputError):
        equivalence.parse_profile(profile)


def test_classify_needs_equal_lengths():
    with pytest.raises(InvalidInputError):
        equivalence.classify(["132", "1342"], "des", 4)


def test_classify_independent_of_threads():
    pats = ["13542", "14352", "14532", "15342"]
    a = equivalence.classify(pats, "des,inv", 7, threads=1).to_json()
    b = equivalence.classify(pats, "des,inv", 7, threads=3).to_json()
    assert a == b


@pytest.mark.parametrize("alpha, beta", [("14532", "15342"), ("241365", "234165")])
def test_match_distributions_agree_at_p1(alpha, beta):
    assert equivalence.match_distribution_gap(alpha, beta, 7) is None


def test_match_distribution_with_p_kept():
    assert equivalence.match_distribution_gap("14532", "15342", 7, keep_p=True) is None


@pytest.mark.parametrize("sigma, image", [
    ("14532", "15342"), ("1453276", "1534276"), ("6145327", "6153427"), ("1234567", "1234567")])
def test_phi_examples(sigma, image):
    assert equivalence.phi("14532", "15342", sigma) == Permutation(image)


@pytest.mark.parametrize("n", range(5, 9))
def test_phi_bijection(n):
    r = equivalence.verify_phi("14532", "15342", n)
    assert r.ok
    assert r.preserves == {"des": True, "lrmin": True, "inv": True}
    assert r.counts["A"] == r.counts["B"]


def test_phi_counts_at_8():
    assert equivalence.partition_counts("14532", "15342", 8) == {"A": 1344, "B": 1344, "C": 0, "D": 37632}


@pytest.mark.parametrize("alpha, beta", [("14532", "14532"), ("14253", "15342"), ("132", "1342"), ("15432", "14532")])
def test_phi_hypotheses(alpha, beta):
    with pytest.raises(InvalidInputError):
        equivalence.phi_prefix(alpha, beta)


@pytest.mark.parametrize("kind, blocks, variant, want", [
    ("t", 1, "1", "14532"),
    ("t", 1, "2", "15342"),
    ("t", 2, "12", "14538672"),
    ("s", 1, "1", "145362"),
    ("s", 1, "2", "136452"),
])
def test_family_members(kind, blocks, variant, want):
    assert str(equivalence.family(kind, blocks, variant)) == want


def test_family_variants_share_des_and_inv():
    fam = equivalence.family_variants("t", 2)
    assert len(fam) == 4
    assert len({(des(p), inv(p)) for p in fam}) == 1


@pytest.mark.parametrize("kind, blocks, variant", [("u", 1, "1"), ("t", 0, ""), ("t", 2, "13"), ("t", 2, "1")])
def test_family_rejects(kind, blocks, variant):
    with pytest.raises(InvalidInputError):
        equivalence.family(kind, blocks, variant)


def test_t_family_two_blocks_one_class():
    r = equivalence.classify(equivalence.family_variants("t", 2), "des,inv", 8)
    assert len(r.classes) == 1


def test_table_rows_computed():
    rows = {str(r.sigma): r for r in equivalence.table_rows()}
    assert (rows["15432"].des, rows["15432"].inv) == (3, 6)
    assert not rows["14253"].minimal_overlapping
    assert rows["12453"].inv == 2
