"""
Brick tabloids, the signed object space O_{Gamma,n} and the involution J.

An object is a pair (B, sigma): a composition B of n into bricks and a
permutation sigma of n such that no Gamma-match lies inside a single brick.
Cell labels are derived, never stored: a cell c carries z when c and c+1 sit
in the same brick with sigma_c > sigma_{c+1}, and the last cell of every brick
carries -z.  So sgn(O) = (-1)^(number of bricks) and
W(O) = q^inv(sigma) z^(internal descents + number of bricks).

Cells are 0-based internally; brick i covers cells starts[i] .. ends[i].
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from cwilf.errors import BudgetExceededError, InvalidInputError
from cwilf.perm_core import Permutation, PatternSet, des, inv, parse_perm, permutations
from cwilf.qpoly import MultiPoly

OBJECT_BUDGET = 8


# -- brick tabloids -------------------------------------------------------------

@dataclass(frozen=True)
class BrickTabloid:
    bricks: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(v) for v in self.bricks)
        if not b or any(v < 1 for v in b):
            raise InvalidInputError(f"bricks must be positive, got {self.bricks}")
        object.__setattr__(self, "bricks", b)

    @property
    def n(self) -> int:
        return sum(self.bricks)

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(sorted(self.bricks, reverse=True))

    @property
    def starts(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate((0,) + self.bricks[:-1]))

    @property
    def ends(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in itertools.accumulate(self.bricks))


def compositions(n: int) -> list[tuple[int, ...]]:
    """All compositions of n in lexicographic order."""
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        out.extend((first,) + rest for rest in compositions(n - first))
    return out


def _distinct_arrangements(parts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    counts = Counter(parts)
    keys = sorted(counts)
    total = len(parts)

    def rec(prefix):
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1

    yield from rec([])


def count_brick_tabloids(lam: Sequence[int], n: int) -> int:
    """B_{lambda,n}: the number of ways to lay the parts of lambda in a row of n cells."""
    lam = [int(v) for v in lam]
    if any(v < 1 for v in lam) or sum(lam) != n:
        raise InvalidInputError(f"{tuple(lam)} is not a partition of {n}")
    return sum(1 for _ in _distinct_arrangements(lam))


# -- filled tabloids ------------------------------------------------------------

@dataclass(frozen=True)
class FilledTabloid:
    tabloid: BrickTabloid
    sigma: Permutation

    def __post_init__(self):
        if self.tabloid.n != len(self.sigma):
            raise InvalidInputError(
                f"bricks {self.tabloid.bricks} do not cover a permutation of length {len(self.sigma)}")

    @property
    def bricks(self) -> tuple[int, ...]:
        return self.tabloid.bricks

    def brick_of(self, cell: int) -> int:
        for i, e in enumerate(self.tabloid.ends):
            if cell <= e:
                return i
        raise InvalidInputError(f"cell {cell} outside the tabloid")

    def labels(self) -> list[str]:
        """Per cell: 'z', '-z' or '' (0-based cells)."""
        out = [""] * len(self.sigma)
        ends = set(self.tabloid.ends)
        for c in range(len(self.sigma)):
            if c in ends:
                out[c] = "-z"
            elif self.sigma[c] > self.sigma[c + 1]:
                out[c] = "z"
        return out

    @property
    def sign(self) -> int:
        return -1 if len(self.bricks) % 2 else 1

    @property
    def z_power(self) -> int:
        return sum(1 for lab in self.labels() if lab)

    @property
    def weight(self) -> MultiPoly:
        return MultiPoly.monomial(1, q=inv(self.sigma), z=self.z_power)

    def firsts(self) -> list[int]:
        return [self.sigma[s] for s in self.tabloid.starts]

    def is_valid(self, patterns) -> bool:
        ps = PatternSet.of(patterns)
        return _valid(self.tabloid.starts, self.tabloid.ends, ps.match_intervals(self.sigma))

    def to_json(self) -> dict:
        return {"bricks": list(self.bricks), "sigma": str(self.sigma),
                "sign": self.sign, "weight": str(self.weight)}

    def __str__(self) -> str:
        cells = [str(v) for v in self.sigma]
        out, pos = [], 0
        for b in self.bricks:
            out.append(" ".join(cells[pos:pos + b]))
            pos += b
        return "|" + "|".join(out) + "|"


def from_blocks(bricks: Sequence[int], blocks: Sequence[Iterable[int]],
                fillings: Sequence[Sequence[int]]) -> FilledTabloid:
    """Build (B, sigma) from an ordered set partition and one permutation per brick:
    brick i holds the elements of blocks[i] arranged in the relative order fillings[i]."""
    if not len(bricks) == len(blocks) == len(fillings):
        raise InvalidInputError("need one block and one filling per brick")
    sigma = []
    for size, block, fill in zip(bricks, blocks, fillings):
        block = sorted(block)
        fill = parse_perm(fill)
        if len(block) != size or len(fill) != size:
            raise InvalidInputError(f"brick of size {size} got block {block} and filling {fill}")
        sigma.extend(block[v - 1] for v in fill)
    return FilledTabloid(BrickTabloid(tuple(bricks)), Permutation(sigma))


# -- the involution ---------------------------------------------------------------

def _valid(starts, ends, intervals) -> bool:
    # no match may sit inside one brick; intervals are sorted by start
    for s, t in intervals:
        for bs, be in zip(starts, ends):
            if bs <= s and t <= be:
                return False
    return True


class _Context:
    """Pattern set plus a per-sigma cache of match intervals."""

    def __init__(self, patterns):
        self.ps = PatternSet.of(patterns)
        self.k = max(des(t) for t in self.ps)
        self._cache: dict[tuple[int, ...], list[tuple[int, int]]] = {}

    def intervals(self, sigma: Sequence[int]) -> list[tuple[int, int]]:
        key = tuple(sigma)
        got = self._cache.get(key)
        if got is None:
            got = self.ps.match_intervals(key)
            self._cache[key] = got
        return got


@lru_cache(maxsize=16)
def _context(ps: PatternSet) -> _Context:
    return _Context(ps)


def _apply(sigma: Sequence[int], bricks: tuple[int, ...], intervals) -> tuple[int, ...] | None:
    """New brick tuple under J, or None for a fixed point."""
    n = len(sigma)
    starts = list(itertools.accumulate((0,) + bricks[:-1]))
    ends = [s + b - 1 for s, b in zip(starts, bricks)]
    for j, (bs, be) in enumerate(zip(starts, ends)):
        # Case I candidates inside brick j, then the Case II candidate at its end
        prev_ok = None
        for c in range(bs, be):
            if sigma[c] <= sigma[c + 1]:
                continue
            if j == 0:
                ok = True
            else:
                if prev_ok is None:
                    prev_ok = sigma[bs - 1] < sigma[bs]
                ok = prev_ok or any(starts[j - 1] <= s and t <= c for s, t in intervals)
            if ok:
                return bricks[:j] + (c - bs + 1, be - c) + bricks[j + 1:]
        if be + 1 < n and sigma[be] > sigma[be + 1]:
            lo, hi = bs, ends[j + 1]
            if not any(lo <= s and t <= hi for s, t in intervals):
                return bricks[:j] + (bricks[j] + bricks[j + 1],) + bricks[j + 2:]
    return None


def involution_j(patterns, obj: FilledTabloid) -> FilledTabloid:
    """J_Gamma: split after the leftmost usable z-cell or merge at the leftmost
    usable brick end, whichever comes first; fixed points are returned as is."""
    ctx = _context(PatternSet.of(patterns))
    new = _apply(obj.sigma, obj.bricks, ctx.intervals(obj.sigma))
    if new is None:
        return obj
    return FilledTabloid(BrickTabloid(new), obj.sigma)


def _check_budget(n: int, budget: int | None) -> None:
    limit = OBJECT_BUDGET if budget is None else budget
    if n > limit:
        raise BudgetExceededError(f"object enumeration for n={n} exceeds the budget n <= {limit}")


def enumerate_objects(patterns, n: int, *, budget: int | None = None) -> Iterator[FilledTabloid]:
    """Every object of O_{Gamma,n}: compositions outer, permutations inner."""
    _check_budget(n, budget)
    ctx = _context(PatternSet.of(patterns))
    perms = list(permutations(n))
    ivs = [ctx.intervals(s) for s in perms]
    for comp in compositions(n):
        tab = BrickTabloid(comp)
        starts, ends = tab.starts, tab.ends
        for sigma, iv in zip(perms, ivs):
            if _valid(starts, ends, iv):
                yield FilledTabloid(tab, sigma)


def fixed_points(patterns, n: int, *, budget: int | None = None) -> Iterator[FilledTabloid]:
    ctx = _context(PatternSet.of(patterns))
    for obj in enumerate_objects(patterns, n, budget=budget):
        if _apply(obj.sigma, obj.bricks, ctx.intervals(obj.sigma)) is None:
            yield obj


# -- fixed point properties -----------------------------------------------------------

def descent_bottoms_qualify(patterns) -> bool:
    """True if every pattern with d >= 1 descents has descent bottoms 2, ..., d+1
    reading left to right."""
    for tau in PatternSet.of(patterns):
        bottoms = [tau[i + 1] for i in range(len(tau) - 1) if tau[i] > tau[i + 1]]
        if bottoms and bottoms != list(range(2, len(bottoms) + 2)):
            return False
    return True


def increasing_where_unforced(obj: FilledTabloid) -> bool:
    """Bricks that open the row or follow an ascent across the boundary are increasing."""
    sigma = obj.sigma
    for j, (bs, be) in enumerate(zip(obj.tabloid.starts, obj.tabloid.ends)):
        if j == 0 or sigma[bs - 1] < sigma[bs]:
            if any(sigma[c] > sigma[c + 1] for c in range(bs, be)):
                return False
    return True


def descent_boundaries_covered(patterns, obj: FilledTabloid) -> bool:
    """At each descent across a brick boundary some match inside the two bricks
    uses both boundary cells, and the later brick has at most k-1 z-cells,
    k being the largest descent count in Gamma."""
    ctx = _context(PatternSet.of(patterns))
    sigma = obj.sigma
    iv = ctx.intervals(sigma)
    starts, ends = obj.tabloid.starts, obj.tabloid.ends
    for j in range(1, len(starts)):
        e = starts[j]
        if sigma[e - 1] < sigma[e]:
            continue
        if not any(starts[j - 1] <= s and s <= e - 1 and e <= t and t <= ends[j] for s, t in iv):
            return False
        zs = sum(1 for c in range(e, ends[j]) if sigma[c] > sigma[c + 1])
        if zs > ctx.k - 1:
            return False
    return True


def firsts_increasing(obj: FilledTabloid) -> bool:
    f = obj.firsts()
    return all(a < b for a, b in zip(f, f[1:]))


# -- verification over a whole object space -------------------------------------------

@dataclass
class InvolutionReport:
    patterns: tuple[str, ...]
    n: int
    objects: int
    fixed: int
    involutive: bool
    sign_reversing: bool
    weight_preserving: bool
    total: MultiPoly
    fixed_total: MultiPoly
    lemma_1: bool
    lemma_2: bool
    lemma_3: bool | None

    @property
    def ok(self) -> bool:
        return (self.involutive and self.sign_reversing and self.weight_preserving
                and self.total == self.fixed_total and self.lemma_1 and self.lemma_2
                and self.lemma_3 is not False)

    def to_json(self) -> dict:
        return {
            "patterns": list(self.patterns), "n": self.n, "objects": self.objects,
            "fixed": self.fixed, "involutive": self.involutive,
            "sign_reversing": self.sign_reversing, "weight_preserving": self.weight_preserving,
            "total": str(self.total), "fixed_total": str(self.fixed_total),
            "lemma_1": self.lemma_1, "lemma_2": self.lemma_2, "lemma_3": self.lemma_3,
        }


def _signed_sum(counter: Counter) -> MultiPoly:
    return MultiPoly.from_terms(((i, 0, zp, 0, 0), c) for (zp, i), c in counter.items() if c)


def _z_power(sigma, bricks) -> int:
    zp, pos = len(bricks), 0
    for b in bricks:
        for c in range(pos, pos + b - 1):
            if sigma[c] > sigma[c + 1]:
                zp += 1
        pos += b
    return zp


def verify_involution(patterns, n: int, *, budget: int | None = None) -> InvolutionReport:
    """Check J on all of O_{Gamma,n} and collect both signed sums."""
    ps = PatternSet.of(patterns)
    _check_budget(n, budget)
    ctx = _context(ps)
    qualifies = descent_bottoms_qualify(ps)
    objects = fixed = 0
    involutive = sign_rev = weight_ok = True
    lem1 = lem2 = True
    lem3: bool | None = True if qualifies else None
    total, fixed_total = Counter(), Counter()
    inv_cache: dict[tuple[int, ...], int] = {}
    for obj in enumerate_objects(ps, n, budget=budget):
        objects += 1
        sigma, bricks = obj.sigma, obj.bricks
        iv = ctx.intervals(sigma)
        i = inv_cache.get(sigma)
        if i is None:
            i = inv_cache[sigma] = inv(sigma)
        zp = _z_power(sigma, bricks)
        sgn = -1 if len(bricks) % 2 else 1
        total[(zp, i)] += sgn
        image = _apply(sigma, bricks, iv)
        if image is None:
            fixed += 1
            fixed_total[(zp, i)] += sgn
            lem1 = lem1 and increasing_where_unforced(obj)
            lem2 = lem2 and descent_boundaries_covered(ps, obj)
            if qualifies:
                lem3 = lem3 and firsts_increasing(obj)
            continue
        if _apply(sigma, image, iv) != bricks:
            involutive = False
        if (len(image) - len(bricks)) % 2 == 0:
            sign_rev = False
        if _z_power(sigma, image) != zp:
            weight_ok = False
    return InvolutionReport(tuple(str(p) for p in ps), n, objects, fixed, involutive, sign_rev,
                            weight_ok, _signed_sum(total), _signed_sum(fixed_total),
                            lem1, lem2, lem3)


def find_fixed_point(patterns, n: int, predicate, *, budget: int | None = None) -> FilledTabloid | None:
    """First fixed point (in enumeration order) satisfying ``predicate``."""
    for obj in fixed_points(patterns, n, budget=budget):
        if predicate(obj):
            return obj
    return None


def object_count_bound(n: int) -> int:
    return 2 ** (n - 1) * math.factorial(n) if n else 1
