"""
Permutations in one-line notation, reduction, the statistics des / inv /
coinv / LRmin, and consecutive pattern matching.

Positions are 1-based everywhere in the public API, following the usual
combinatorial convention: ``match_positions(Permutation("1234"), ["123"])``
is ``[1, 2]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from cwilf.errors import InvalidInputError

__all__ = [
    "Permutation", "StatBundle", "PatternSet",
    "parse_perm", "reduce", "stats", "des", "inv", "coinv", "lrmin",
    "descent_set", "match_positions", "match_count", "has_match", "occurs",
    "is_order_isomorphic", "permutations", "perm_range", "rank", "unrank",
]


class Permutation(tuple):
    """A permutation of {1..n} in one-line notation.

    Accepts any iterable of ints, or a string: a bare digit string such as
    ``"15342"`` (only sensible for n <= 9) or space/comma separated integers.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] | str = ()):
        if isinstance(entries, str):
            entries = _parse_entries(entries)
        values = tuple(int(v) for v in entries)
        if sorted(values) != list(range(1, len(values) + 1)):
            raise InvalidInputError(f"not a permutation of 1..{len(values)}: {values}")
        return super().__new__(cls, values)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(self)

    def __str__(self) -> str:
        if len(self) <= 9:
            return "".join(map(str, self))
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def reverse(self) -> Permutation:
        return Permutation(self[::-1])

    def complement(self) -> Permutation:
        m = len(self) + 1
        return Permutation(m - v for v in self)

    def inverse(self) -> Permutation:
        out = [0] * len(self)
        for i, v in enumerate(self):
            out[v - 1] = i + 1
        return Permutation(out)


def _parse_entries(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if any(ch in text for ch in " ,\t"):
        parts = text.replace(",", " ").split()
    elif text.isdigit():
        parts = list(text)
    else:
        raise InvalidInputError(f"cannot parse permutation {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise InvalidInputError(f"cannot parse permutation {text!r}") from None


def parse_perm(text: str | Sequence[int] | Permutation) -> Permutation:
    if isinstance(text, Permutation):
        return text
    return Permutation(text)


def reduce(word: Sequence[int]) -> Permutation:
    """Replace the i-th smallest entry of ``word`` by i."""
    if len(set(word)) != len(word):
        raise InvalidInputError(f"reduction needs distinct entries, got {tuple(word)}")
    order = sorted(range(len(word)), key=word.__getitem__)
    out = [0] * len(word)
    for r, i in enumerate(order, 1):
        out[i] = r
    return Permutation(out)


@dataclass(frozen=True)
class StatBundle:
    des: int
    inv: int
    coinv: int
    lrmin: int
    des_set: frozenset[int]


def descent_set(sigma: Sequence[int]) -> frozenset[int]:
    return frozenset(i + 1 for i in range(len(sigma) - 1) if sigma[i] > sigma[i + 1])


def des(sigma: Sequence[int]) -> int:
    return sum(1 for i in range(len(sigma) - 1) if sigma[i] > sigma[i + 1])


def inv(sigma: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(sigma, 2) if a > b)


def coinv(sigma: Sequence[int]) -> int:
    n = len(sigma)
    return n * (n - 1) // 2 - inv(sigma)


def lrmin(sigma: Sequence[int]) -> int:
    count, low = 0, math.inf
    for v in sigma:
        if v < low:
            count, low = count + 1, v
    return count


def stats(sigma: Sequence[int]) -> StatBundle:
    i = inv(sigma)
    n = len(sigma)
    ds = descent_set(sigma)
    return StatBundle(des=len(ds), inv=i, coinv=n * (n - 1) // 2 - i,
                      lrmin=lrmin(sigma), des_set=ds)


class PatternSet:
    """A finite set of patterns, grouped by length.

    Stores, for each pattern, its *value chain*: the positions sorted by value.
    A window w is order-isomorphic to tau iff w is increasing along tau's chain,
    which lets matching run without reducing the window.
    """

    __slots__ = ("patterns", "by_length", "_chains", "_keys")

    def __init__(self, patterns: Iterable[Sequence[int] | str]):
        pats = sorted({parse_perm(p) for p in patterns})
        if not pats:
            raise InvalidInputError("empty pattern set")
        if any(len(p) == 0 for p in pats):
            raise InvalidInputError("patterns must be nonempty")
        self.patterns: tuple[Permutation, ...] = tuple(pats)
        by_len: dict[int, list[Permutation]] = {}
        for p in pats:
            by_len.setdefault(len(p), []).append(p)
        self.by_length = {k: tuple(v) for k, v in sorted(by_len.items())}
        self._chains = {k: [tuple(p.inverse()) for p in v] for k, v in self.by_length.items()}
        self._keys = {k: frozenset(v) for k, v in self.by_length.items()}

    @classmethod
    def of(cls, patterns) -> PatternSet:
        if isinstance(patterns, PatternSet):
            return patterns
        if isinstance(patterns, (str, Permutation)):
            return cls([patterns])
        return cls(patterns)

    @property
    def length(self) -> int:
        """The common pattern length; raises for mixed-length sets."""
        if len(self.by_length) != 1:
            raise InvalidInputError(f"patterns of mixed lengths {sorted(self.by_length)}")
        return next(iter(self.by_length))

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    def __eq__(self, other) -> bool:
        return isinstance(other, PatternSet) and self.patterns == other.patterns

    def __hash__(self) -> int:
        return hash(self.patterns)

    def __repr__(self) -> str:
        return "PatternSet({" + ", ".join(map(str, self.patterns)) + "})"

    def key(self) -> str:
        return ",".join(str(p).replace(" ", "_") for p in self.patterns)

    def window_matches(self, sigma: Sequence[int], start: int, length: int) -> bool:
        """Whether sigma[start:start+length] (0-based) matches a pattern of that length."""
        chains = self._chains.get(length)
        if not chains:
            return False
        if len(chains) == 1:
            chain = chains[0]
            prev = sigma[start + chain[0] - 1]
            for c in chain[1:]:
                v = sigma[start + c - 1]
                if v < prev:
                    return False
                prev = v
            return True
        return reduce(sigma[start:start + length]) in self._keys[length]

    def match_intervals(self, sigma: Sequence[int]) -> list[tuple[int, int]]:
        """All matches of any length as 0-based inclusive (start, end) cell pairs."""
        out = []
        n = len(sigma)
        for length in self.by_length:
            for s in range(n - length + 1):
                if self.window_matches(sigma, s, length):
                    out.append((s, s + length - 1))
        out.sort()
        return out


def is_order_isomorphic(word: Sequence[int], tau: Sequence[int]) -> bool:
    return len(word) == len(tau) and tuple(reduce(word)) == tuple(tau)


def match_positions(sigma: Sequence[int], patterns) -> list[int]:
    """1-based start positions i with red(sigma_i .. sigma_{i+j-1}) in patterns."""
    ps = PatternSet.of(patterns)
    j = ps.length
    return [s + 1 for s in range(len(sigma) - j + 1) if ps.window_matches(sigma, s, j)]


def match_count(sigma: Sequence[int], patterns) -> int:
    ps = PatternSet.of(patterns)
    return len(ps.match_intervals(sigma))


def has_match(sigma: Sequence[int], patterns) -> bool:
    """True if some window (of any pattern length in the set) matches."""
    ps = PatternSet.of(patterns)
    n = len(sigma)
    for length in ps.by_length:
        for s in range(n - length + 1):
            if ps.window_matches(sigma, s, length):
                return True
    return False


def occurs(sigma: Sequence[int], patterns) -> bool:
    """Classical containment: some subsequence, not necessarily consecutive."""
    ps = PatternSet.of(patterns)
    for length, pats in ps.by_length.items():
        keys = set(pats)
        for idx in itertools.combinations(range(len(sigma)), length):
            if reduce([sigma[i] for i in idx]) in keys:
                return True
    return False


def permutations(n: int) -> Iterator[Permutation]:
    """S_n in lexicographic order."""
    for p in itertools.permutations(range(1, n + 1)):
        yield tuple.__new__(Permutation, p)


def unrank(n: int, r: int) -> Permutation:
    """The r-th (0-based) permutation of S_n in lexicographic order."""
    if not 0 <= r < math.factorial(n):
        raise InvalidInputError(f"rank {r} out of range for S_{n}")
    pool = list(range(1, n + 1))
    out = []
    for k in range(n, 0, -1):
        f = math.factorial(k - 1)
        i, r = divmod(r, f)
        out.append(pool.pop(i))
    return tuple.__new__(Permutation, out)


def rank(sigma: Sequence[int]) -> int:
    pool = sorted(sigma)
    r = 0
    for k, v in enumerate(sigma):
        i = pool.index(v)
        r += i * math.factorial(len(sigma) - k - 1)
        pool.pop(i)
    return r


def _next_perm(a: list[int]) -> bool:
    i = len(a) - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(a) - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = reversed(a[i + 1:])
    return True


def perm_range(n: int, start: int, stop: int) -> Iterator[Permutation]:
    """Permutations with lexicographic rank in [start, stop).

    Disjoint ranges partition S_n, so callers can split an enumeration and
    combine the pieces with any commutative aggregation.
    """
    stop = min(stop, math.factorial(n))
    if start >= stop:
        return
    a = list(unrank(n, start))
    for _ in range(stop - start):
        yield tuple.__new__(Permutation, a)
        if not _next_perm(a):
            break
