"""
Truncated exponential-type generating functions with polynomial coefficients.

A series ``sum_n a_n t^n / f(n)`` is stored as its coefficient list a_0..a_N
plus a normalization tag naming f:

    "pq-factorial"     f(n) = [n]_{p,q}!
    "q-factorial"      f(n) = [n]_q!
    "plain-factorial"  f(n) = n!

so a product has coefficients c_n = sum_k C(n, k) a_k b_{n-k} with C the
matching binomial.  Mixing tags is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from cwilf import brute
from cwilf.errors import ConsistencyError, InvalidInputError
from cwilf.perm_core import PatternSet, parse_perm
from cwilf.qpoly import ONE, ZERO, MultiPoly, RatPoly, pq_binomial, q_binomial

NORMS = ("pq-factorial", "q-factorial", "plain-factorial")


def conv_coeff(norm: str, n: int, k: int) -> MultiPoly | int:
    if norm == "plain-factorial":
        return math.comb(n, k)
    if norm == "q-factorial":
        return q_binomial(n, k)
    if norm == "pq-factorial":
        return pq_binomial(n, k)
    raise InvalidInputError(f"unknown normalization {norm!r}")


@dataclass(frozen=True)
class QSeries:
    coeffs: tuple[MultiPoly, ...]
    norm: str

    def __post_init__(self):
        if self.norm not in NORMS:
            raise InvalidInputError(f"unknown normalization {self.norm!r}; expected {NORMS}")
        object.__setattr__(self, "coeffs", tuple(
            MultiPoly.const(c) if isinstance(c, int) else c for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> MultiPoly:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> QSeries:
        return QSeries(self.coeffs[:order + 1], self.norm)

    def _same(self, other: QSeries) -> int:
        if self.norm != other.norm:
            raise InvalidInputError(f"cannot combine {self.norm} and {other.norm} series")
        return min(self.order, other.order)

    def __add__(self, other: QSeries) -> QSeries:
        m = self._same(other)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[:m + 1], other.coeffs)), self.norm)

    def __mul__(self, other: QSeries) -> QSeries:
        m = self._same(other)
        out = []
        for n in range(m + 1):
            acc = ZERO
            for k in range(n + 1):
                if self.coeffs[k] and other.coeffs[n - k]:
                    acc = acc + conv_coeff(self.norm, n, k) * self.coeffs[k] * other.coeffs[n - k]
            out.append(acc)
        return QSeries(tuple(out), self.norm)

    def map(self, fn: Callable[[MultiPoly], MultiPoly], norm: str | None = None) -> QSeries:
        return QSeries(tuple(fn(c) for c in self.coeffs), norm or self.norm)

    def substitute(self, **bindings) -> QSeries:
        """Substitute into every coefficient.

        Setting p=1 turns a pq-factorial series into a q-factorial one, and
        q=1 then turns it into a plain one, because the normalizing factorials
        specialize the same way.
        """
        norm = self.norm
        if norm == "pq-factorial" and bindings.get("p") == 1:
            norm = "q-factorial"
        if norm == "q-factorial" and bindings.get("q") == 1:
            norm = "plain-factorial"
        return self.map(lambda c: c.substitute(bindings), norm)

    def to_json(self) -> dict:
        return {"norm": self.norm, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> QSeries:
        return cls(tuple(MultiPoly.from_json(c) for c in obj["coeffs"]), obj["norm"])


def reciprocal(a: QSeries) -> QSeries:
    """b with a*b = 1 through order N: b_n = -sum_{k>=1} C(n,k) a_k b_{n-k}."""
    if a.coeffs[0] != ONE:
        raise InvalidInputError(f"reciprocal needs a_0 = 1, got {a.coeffs[0]}")
    b = [ONE]
    for n in range(1, a.order + 1):
        acc = ZERO
        for k in range(1, n + 1):
            if a.coeffs[k] and b[n - k]:
                acc = acc + (conv_coeff(a.norm, n, k) * a.coeffs[k]) * b[n - k]
        b.append(-acc)
    return QSeries(tuple(b), a.norm)


# -- brute-force series -----------------------------------------------------

def _series_from_tally(N: int, names, build: Callable[[tuple[int, ...]], Sequence[int]],
                       norm: str, avoid=None, count=None, budget=None,
                       const: MultiPoly = ONE) -> QSeries:
    brute.check_budget(N, budget)
    coeffs = [const]
    for n in range(1, N + 1):
        t = brute.tally(n, names, avoid=avoid, count=count, budget=budget)
        coeffs.append(MultiPoly.from_terms((build(k), c) for k, c in t.items()))
    return QSeries(tuple(coeffs), norm)


def brute_inm(patterns, N: int, *, budget: int | None = None) -> QSeries:
    """INM_{Gamma,n}(q,z) = sum over Gamma-match-free sigma of z^{des+1} q^{inv}."""
    ps = PatternSet.of(patterns)
    return _series_from_tally(N, ("des", "inv"), lambda k: (k[1], 0, k[0] + 1, 0, 0),
                              "q-factorial", avoid=ps, budget=budget)


def brute_nm_xy(patterns, N: int, *, budget: int | None = None) -> QSeries:
    """NM_{Gamma,n}(x,y) = sum over Gamma-match-free sigma of x^{LRmin} y^{1+des}."""
    ps = PatternSet.of(patterns)
    return _series_from_tally(N, ("des", "lrmin"), lambda k: (0, 0, 0, k[1], k[0] + 1),
                              "plain-factorial", avoid=ps, budget=budget)


def match_distribution(patterns, N: int, *, budget: int | None = None) -> QSeries:
    """sum over all sigma in S_n of x^{mch} p^{coinv} q^{inv}."""
    ps = PatternSet.of(patterns)
    return _series_from_tally(N, ("mch", "inv", "coinv"), lambda k: (k[1], k[2], 0, k[0], 0),
                              "pq-factorial", count=ps, budget=budget)


def iu_from_brute(patterns, N: int, *, budget: int | None = None) -> QSeries:
    """IU_{Gamma,n}(q,z): coefficients of 1 / INM_Gamma(t,q,z)."""
    return reciprocal(brute_inm(patterns, N, budget=budget))


def u_from_brute(patterns, N: int, *, budget: int | None = None) -> QSeries:
    """U_{Gamma,n}(y): coefficients of 1 / NM_Gamma(t,1,y), a plain series in y."""
    nm = brute_nm_xy(patterns, N, budget=budget).substitute(x=1)
    return reciprocal(nm)


# -- log / exp with rational intermediates -----------------------------------

def _ordinary(u: QSeries) -> list[RatPoly]:
    if u.norm != "plain-factorial":
        raise InvalidInputError("log/exp expansion needs a plain-factorial series")
    return [RatPoly(c, math.factorial(n)) for n, c in enumerate(u.coeffs)]


def series_log(f: Sequence[RatPoly]) -> list[RatPoly]:
    """Ordinary coefficients of log(f) for f_0 = 1."""
    if f[0] != RatPoly(ONE):
        raise InvalidInputError("log needs constant term 1")
    g = [RatPoly(ZERO)]
    for n in range(1, len(f)):
        acc = RatPoly(ZERO)
        for k in range(1, n):
            acc = acc + g[k] * f[n - k] * k
        g.append(f[n] - acc * Fraction(1, n))
    return g


def series_exp(g: Sequence[RatPoly]) -> list[RatPoly]:
    """Ordinary coefficients of exp(g) for g_0 = 0."""
    if g[0].num:
        raise InvalidInputError("exp needs constant term 0")
    h = [RatPoly(ONE)]
    for n in range(1, len(g)):
        acc = RatPoly(ZERO)
        for k in range(1, n + 1):
            acc = acc + g[k] * h[n - k] * k
        h.append(acc * Fraction(1, n))
    return h


def power_x(u: QSeries, N: int | None = None) -> QSeries:
    """(1/U(t,y))^x = exp(-x log U), returned as a plain-factorial series.

    Every coefficient n! * [t^n] must come out with integer coefficients;
    a leftover denominator raises ConsistencyError.
    """
    if u.coeffs[0] != ONE:
        raise InvalidInputError("power_x needs u_0 = 1")
    if N is not None:
        u = u.truncate(N)
    f = _ordinary(u)
    x = MultiPoly.var("x")
    minus_xlog = [c * (-x) for c in series_log(f)]
    h = series_exp(minus_xlog)
    out = []
    for n, c in enumerate(h):
        c = c * math.factorial(n)
        if not c.is_integral():
            raise ConsistencyError(f"coefficient {n} kept denominator {c.den}")
        out.append(c.to_poly())
    return QSeries(tuple(out), "plain-factorial")


def nm_xy_from_u(tau, N: int, *, budget: int | None = None) -> QSeries:
    """NM_tau(t,x,y) via (1/U_tau)^x with U_tau from the x = 1 specialization."""
    tau = parse_perm(tau)
    if not tau or tau[0] != 1:
        raise InvalidInputError(f"(1/U)^x form needs a pattern starting with 1, got {tau}")
    return power_x(u_from_brute(tau, N, budget=budget))


def series_equal_upto(a: QSeries, b: QSeries, N: int) -> int | None:
    """First index n <= N where the coefficients differ, or None."""
    for n in range(N + 1):
        if a.coeffs[n] != b.coeffs[n]:
            return n
    return None


def from_coeffs(coeffs: Iterable[MultiPoly | int], norm: str) -> QSeries:
    return QSeries(tuple(coeffs), norm)


def match_distribution_from_packings(tau, N: int, packings: dict[int, MultiPoly]) -> QSeries:
    """The pq-factorial series 1 / (1 - t - sum_n (x-1)^n mp_m t^m / [m]_{p,q}!)
    with m = n(j-1)+1, given ``packings`` = {m: mp_m(p,q)}.

    For a minimal overlapping tau this is the distribution of tau-matches
    weighted by p^coinv q^inv.
    """
    tau = parse_perm(tau)
    j = len(tau)
    x1 = MultiPoly.var("x") - 1
    d = [ZERO] * (N + 1)
    d[0] = ONE
    if N >= 1:
        d[1] = -ONE
    for m, mp in packings.items():
        n, r = divmod(m - 1, j - 1)
        if r or n < 1:
            raise InvalidInputError(f"{m} is not a maximum packing length for a pattern of length {j}")
        if m <= N:
            d[m] = d[m] - x1 ** n * mp
    for m in range(j, N + 1, j - 1):
        if m not in packings:
            raise InvalidInputError(f"missing packing polynomial for length {m}")
    return reciprocal(QSeries(tuple(d), "pq-factorial"))
