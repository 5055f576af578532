"""
c-Wilf equivalence up to a finite order, the replacement bijection between
alpha-avoiding and beta-avoiding permutations, and the t/s pattern families.

Everything here is a witness at desk scale: two patterns are reported as
equivalent *up to N*, never outright.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from cwilf import brute
from cwilf.errors import ConsistencyError, InvalidInputError
from cwilf.overlap import are_mutually_minimal_overlapping, is_minimal_overlapping
from cwilf.perm_core import (Permutation, PatternSet, des, inv, lrmin, match_positions,
                             parse_perm, permutations)
from cwilf.qpoly import ONE, MultiPoly, VARS
from cwilf.qseries import match_distribution, series_equal_upto

# which polynomial variable carries each statistic
STAT_VARS = {"des": "z", "inv": "q", "lrmin": "x"}


def parse_profile(profile: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(profile, str):
        profile = [s.strip() for s in profile.split(",") if s.strip()]
    bad = [s for s in profile if s not in STAT_VARS]
    if bad or not profile:
        raise InvalidInputError(f"statistic profile must be a nonempty subset of {sorted(STAT_VARS)}")
    return tuple(sorted(set(profile), key=list(STAT_VARS).index))


@dataclass
class EquivReport:
    profile: tuple[str, ...]
    N: int
    vectors: dict[Permutation, list[MultiPoly]]
    classes: list[list[Permutation]] = field(default_factory=list)
    distinguishing: dict[tuple[Permutation, Permutation], int] = field(default_factory=dict)

    def same_class(self, a, b) -> bool:
        a, b = parse_perm(a), parse_perm(b)
        return any(a in c and b in c for c in self.classes)

    def to_json(self) -> dict:
        return {
            "profile": list(self.profile),
            "N": self.N,
            "claim": f"equivalent up to n = {self.N}",
            "classes": [[str(p) for p in c] for c in self.classes],
            "distinguishing": [{"pair": [str(a), str(b)], "n": n}
                               for (a, b), n in sorted(self.distinguishing.items())],
            "vectors": {str(p): [str(c) for c in v] for p, v in sorted(self.vectors.items())},
        }


def profile_vector(tau, profile: Sequence[str], N: int, *, budget: int | None = None) -> list[MultiPoly]:
    """[sum over NM_n(tau) of the profile monomial for n = 0..N]."""
    profile = parse_profile(profile)
    idx = [VARS.index(STAT_VARS[s]) for s in profile]
    out = [ONE]
    for n in range(1, N + 1):
        t = brute.tally(n, profile, avoid=PatternSet.of(tau), budget=budget)
        terms = []
        for key, c in t.items():
            e = [0] * len(VARS)
            for i, v in zip(idx, key):
                e[i] = v
            terms.append((e, c))
        out.append(MultiPoly.from_terms(terms))
    return out


def classify(patterns, profile, N: int, *, budget: int | None = None,
             threads: int = 1) -> EquivReport:
    pats = sorted({parse_perm(p) for p in patterns})
    if not pats:
        raise InvalidInputError("no patterns to classify")
    if len({len(p) for p in pats}) != 1:
        raise InvalidInputError("all patterns must have the same length")
    profile = parse_profile(profile)
    brute.check_budget(N, budget)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vecs = list(pool.map(lambda p: profile_vector(p, profile, N, budget=budget), pats))
    else:
        vecs = [profile_vector(p, profile, N, budget=budget) for p in pats]
    vectors = dict(zip(pats, vecs))
    classes: list[list[Permutation]] = []
    for p in pats:
        for c in classes:
            if vectors[c[0]] == vectors[p]:
                c.append(p)
                break
        else:
            classes.append([p])
    report = EquivReport(profile, N, vectors, classes)
    for i, a in enumerate(pats):
        for b in pats[i + 1:]:
            d = next((n for n in range(N + 1) if vectors[a][n] != vectors[b][n]), None)
            if d is not None:
                report.distinguishing[(a, b)] = d
    return report


def match_distribution_gap(alpha, beta, N: int, *, keep_p: bool = False,
                           budget: int | None = None) -> int | None:
    """First n <= N where the match distributions of alpha and beta differ
    (with p set to 1 unless ``keep_p``), or None."""
    a = match_distribution(alpha, N, budget=budget)
    b = match_distribution(beta, N, budget=budget)
    if not keep_p:
        a, b = a.substitute(p=1), b.substitute(p=1)
    return series_equal_upto(a, b, N)


# -- the replacement bijection -----------------------------------------------------

def phi_prefix(alpha, beta) -> int:
    """The 1-based a with alpha_i = beta_i for i <= a and alpha_a = 1, after
    checking every hypothesis the bijection needs."""
    alpha, beta = parse_perm(alpha), parse_perm(beta)
    j = len(alpha)
    if len(beta) != j:
        raise InvalidInputError("alpha and beta must have equal length")
    if not are_mutually_minimal_overlapping(alpha, beta).verdict:
        raise InvalidInputError(f"{alpha} and {beta} are not mutually minimal overlapping")
    a = alpha.index(1) + 1
    if a >= j or alpha[:a] != beta[:a]:
        raise InvalidInputError("alpha and beta must agree up to and including the entry 1")
    if alpha[-1] != beta[-1]:
        raise InvalidInputError("alpha and beta must end with the same entry")
    if des(alpha) != des(beta):
        raise InvalidInputError("alpha and beta must have the same number of descents")
    return a


def _phi(alpha: Permutation, beta: Permutation, a: int, sigma: Sequence[int]) -> Permutation:
    j = len(alpha)
    out = list(sigma)
    touched: set[int] = set()
    for i in match_positions(sigma, alpha):
        s = i - 1
        window = sorted(sigma[s:s + j])
        cells = range(s + a, s + j - 1)
        if touched.intersection(cells):
            raise ConsistencyError(f"alpha-matches of {sigma} overlap in more than one letter")
        touched.update(cells)
        for k in cells:
            out[k] = window[beta[k - s] - 1]
    return Permutation(out)


def phi(alpha, beta, sigma) -> Permutation:
    """Rearrange the interior of every alpha-match of sigma so that it reduces to beta."""
    alpha, beta, sigma = parse_perm(alpha), parse_perm(beta), parse_perm(sigma)
    return _phi(alpha, beta, phi_prefix(alpha, beta), sigma)


@dataclass
class PhiReport:
    alpha: Permutation
    beta: Permutation
    n: int
    counts: dict[str, int]
    into_b: bool
    injective: bool
    onto_b: bool
    preserves: dict[str, bool]
    inverse_ok: bool
    fixes_d: bool

    @property
    def ok(self) -> bool:
        return (self.into_b and self.injective and self.onto_b and self.inverse_ok
                and self.fixes_d and all(self.preserves.values()))

    def to_json(self) -> dict:
        return {"alpha": str(self.alpha), "beta": str(self.beta), "n": self.n,
                "counts": self.counts, "into_B": self.into_b, "injective": self.injective,
                "onto_B": self.onto_b, "preserves": self.preserves,
                "inverse": self.inverse_ok, "fixes_D": self.fixes_d}


def partition_counts(alpha, beta, n: int, *, budget: int | None = None) -> dict[str, int]:
    """Sizes of A_n (alpha only), B_n (beta only), C_n (both), D_n (neither)."""
    brute.check_budget(n, budget)
    arr = brute.perm_array(n)
    ha = brute.match_count_col(arr, PatternSet.of(alpha)) > 0
    hb = brute.match_count_col(arr, PatternSet.of(beta)) > 0
    return {"A": int(np.sum(ha & ~hb)), "B": int(np.sum(hb & ~ha)),
            "C": int(np.sum(ha & hb)), "D": int(np.sum(~ha & ~hb))}


def verify_phi(alpha, beta, n: int, *, budget: int | None = None) -> PhiReport:
    """Exhaustive check of the bijection A_n -> B_n over S_n."""
    alpha, beta = parse_perm(alpha), parse_perm(beta)
    a = phi_prefix(alpha, beta)
    phi_prefix(beta, alpha)
    brute.check_budget(n, budget)
    check_inv = inv(alpha) == inv(beta)
    pa, pb = PatternSet.of(alpha), PatternSet.of(beta)
    counts = partition_counts(alpha, beta, n, budget=budget)
    into_b = inverse_ok = fixes_d = True
    preserves = {"des": True, "lrmin": True}
    if check_inv:
        preserves["inv"] = True
    images = set()
    for sigma in permutations(n):
        has_a = bool(match_positions(sigma, pa))
        has_b = bool(match_positions(sigma, pb))
        if not has_a and not has_b:
            fixes_d = fixes_d and _phi(alpha, beta, a, sigma) == sigma
            continue
        if not has_a or has_b:
            continue
        img = _phi(alpha, beta, a, sigma)
        images.add(img)
        if match_positions(img, pa) or not match_positions(img, pb):
            into_b = False
        preserves["des"] = preserves["des"] and des(img) == des(sigma)
        preserves["lrmin"] = preserves["lrmin"] and lrmin(img) == lrmin(sigma)
        if check_inv:
            preserves["inv"] = preserves["inv"] and inv(img) == inv(sigma)
        inverse_ok = inverse_ok and _phi(beta, alpha, a, img) == sigma
    injective = len(images) == counts["A"]
    onto_b = injective and into_b and counts["A"] == counts["B"]
    return PhiReport(alpha, beta, n, counts, into_b, injective, onto_b, preserves,
                     inverse_ok, fixes_d)


# -- pattern families ------------------------------------------------------------------

_BLOCKS = {
    "t": (3, {1: (1, 2, 0), 2: (2, 0, 1)}),
    "s": (4, {1: (1, 2, 0, 3), 2: (0, 3, 1, 2)}),
}


def parse_variant(variant: str | Sequence[int], blocks: int) -> tuple[int, ...]:
    if isinstance(variant, str):
        variant = [int(ch) for ch in variant]
    v = tuple(int(b) for b in variant)
    if len(v) != blocks or any(b not in (1, 2) for b in v):
        raise InvalidInputError(f"variant must be {blocks} digits from {{1, 2}}, got {variant}")
    return v


def family(kind: str, blocks: int, variant: str | Sequence[int] | None = None) -> Permutation:
    """1 f(x_1) f(x_2) ... f(x_blocks) 2 where each block f is variant 1 or 2.

    kind "t": blocks of three on x, x+1, x+2 with x = 3, 6, 9, ...;
    kind "s": blocks of four on x..x+3 with x = 3, 7, 11, ...
    """
    if kind not in _BLOCKS:
        raise InvalidInputError(f"family kind must be 't' or 's', got {kind!r}")
    if blocks < 1:
        raise InvalidInputError("need at least one block")
    width, shapes = _BLOCKS[kind]
    v = parse_variant(variant if variant is not None else [1] * blocks, blocks)
    out = [1]
    for b, choice in enumerate(v):
        x = 3 + width * b
        out.extend(x + off for off in shapes[choice])
    out.append(2)
    return Permutation(out)


def family_variants(kind: str, blocks: int) -> list[Permutation]:
    from itertools import product
    return [family(kind, blocks, v) for v in product((1, 2), repeat=blocks)]


# -- the S_5 table -----------------------------------------------------------------------

TABLE_S5 = ("12453", "12543", "14253", "15243", "13452",
            "13542", "14352", "14532", "15342", "15432")


@dataclass(frozen=True)
class TableRow:
    sigma: Permutation
    des: int
    inv: int
    minimal_overlapping: bool

    def to_json(self) -> dict:
        return {"sigma": str(self.sigma), "des": self.des, "inv": self.inv,
                "minimal_overlapping": "yes" if self.minimal_overlapping else "no"}


def table_rows(perms: Sequence[str] = TABLE_S5) -> list[TableRow]:
    rows = []
    for s in perms:
        p = parse_perm(s)
        rows.append(TableRow(p, des(p), inv(p), is_minimal_overlapping(p).verdict))
    return rows
