"""
Sparse multivariate polynomials with exact integer coefficients over the
fixed variables (q, p, z, x, y), and the p,q-analogues of integers,
factorials, binomial and multinomial coefficients.

Exponent vectors are packed into a single Python int, 32 bits per variable,
so monomial multiplication is one integer addition.  Terms are kept in a
plain dict ``{packed_exponents: coefficient}`` with no zero coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from cwilf.errors import ConsistencyError, InvalidInputError

VARS = ("q", "p", "z", "x", "y")
_INDEX = {v: i for i, v in enumerate(VARS)}
_SHIFT = 32
_MASK = (1 << _SHIFT) - 1
_NVARS = len(VARS)


def pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK >> 1:
            raise InvalidInputError(f"exponent {e} out of range")
        key |= e << (_SHIFT * i)
    return key


def unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(_NVARS))


def _sort_key(key: int):
    e = unpack(key)
    # graded lex, descending: total degree first, then q > p > z > x > y
    return (-sum(e), tuple(-v for v in e))


Scalar = Union[int, "MultiPoly"]


class MultiPoly:
    """Immutable sparse polynomial in q, p, z, x, y with integer coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None, *, _trusted: bool = False):
        if terms is None:
            self._t: dict[int, int] = {}
        elif _trusted:
            self._t = terms  # type: ignore[assignment]
        else:
            self._t = {k: int(c) for k, c in terms.items() if c}
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> MultiPoly:
        return cls({0: c}) if c else ZERO

    @classmethod
    def var(cls, name: str, power: int = 1) -> MultiPoly:
        return cls.monomial(1, **{name: power})

    @classmethod
    def monomial(cls, coeff: int = 1, **exps: int) -> MultiPoly:
        vec = [0] * _NVARS
        for name, e in exps.items():
            if name not in _INDEX:
                raise InvalidInputError(f"unknown variable {name!r}; expected one of {VARS}")
            vec[_INDEX[name]] = e
        return cls({pack(vec): coeff})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Iterable[int], int]]) -> MultiPoly:
        t: dict[int, int] = {}
        for exps, c in items:
            k = pack(exps)
            t[k] = t.get(k, 0) + int(c)
        return cls(t)

    # -- inspection ------------------------------------------------------
    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """(exponent vector, coefficient) pairs in canonical graded-lex order."""
        return [(unpack(k), self._t[k]) for k in sorted(self._t, key=_sort_key)]

    def raw(self) -> dict[int, int]:
        return dict(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> int:
        return self._t.get(0, 0)

    def degree(self, var: str) -> int:
        i = _INDEX[var]
        if not self._t:
            return -1
        return max((k >> (_SHIFT * i)) & _MASK for k in self._t)

    def variables(self) -> set[str]:
        out = set()
        for k in self._t:
            for i, e in enumerate(unpack(k)):
                if e:
                    out.add(VARS[i])
        return out

    def coeff(self, **exps: int) -> int:
        vec = [0] * _NVARS
        for name, e in exps.items():
            vec[_INDEX[name]] = e
        return self._t.get(pack(vec), 0)

    def coefficient_sum(self) -> int:
        return sum(self._t.values())

    # -- arithmetic ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __neg__(self) -> MultiPoly:
        return MultiPoly({k: -c for k, c in self._t.items()}, _trusted=True)

    def __add__(self, other: Scalar) -> MultiPoly:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        t = dict(a)
        for k, c in b.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return MultiPoly(t, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> MultiPoly:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> MultiPoly:
        return (-self) + other

    def __mul__(self, other: Scalar) -> MultiPoly:
        if isinstance(other, int):
            if not other:
                return ZERO
            return MultiPoly({k: c * other for k, c in self._t.items()}, _trusted=True)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t: dict[int, int] = {}
        get = t.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                t[k] = get(k, 0) + ca * cb
        return MultiPoly({k: c for k, c in t.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MultiPoly:
        if e < 0:
            raise InvalidInputError("negative powers are not polynomials")
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def _leading(self) -> int:
        return min(self._t, key=_sort_key)

    def divexact(self, other: Scalar) -> MultiPoly:
        """Exact division; raises ConsistencyError on a nonzero remainder."""
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero polynomial")
            out = {}
            for k, c in self._t.items():
                qt, r = divmod(c, other)
                if r:
                    raise ConsistencyError(f"{self} not divisible by {other}")
                out[k] = qt
            return MultiPoly(out, _trusted=True)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        lk = other._leading()
        lc = other._t[lk]
        le = unpack(lk)
        rem = dict(self._t)
        quot: dict[int, int] = {}
        while rem:
            rk = min(rem, key=_sort_key)
            re_ = unpack(rk)
            if any(a < b for a, b in zip(re_, le)):
                raise ConsistencyError(f"{self} not divisible by {other}")
            c, r = divmod(rem[rk], lc)
            if r:
                raise ConsistencyError(f"{self} not divisible by {other}")
            mk = rk - lk
            quot[mk] = quot.get(mk, 0) + c
            for k2, c2 in other._t.items():
                k = k2 + mk
                v = rem.get(k, 0) - c * c2
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MultiPoly({k: c for k, c in quot.items() if c}, _trusted=True)

    def __floordiv__(self, other: Scalar) -> MultiPoly:
        return self.divexact(other)

    # -- substitution / evaluation --------------------------------------
    def substitute(self, bindings: Mapping[str, Union[int, str, MultiPoly]] | None = None,
                   **kw) -> MultiPoly:
        """Bind variables to integers, other variables, or polynomials."""
        b = dict(bindings or {}, **kw)
        for name in b:
            if name not in _INDEX:
                raise InvalidInputError(f"unknown variable {name!r}")
        if not b:
            return self
        images: dict[int, MultiPoly] = {}
        for name, val in b.items():
            if isinstance(val, str):
                val = MultiPoly.var(val)
            elif isinstance(val, int):
                val = MultiPoly.const(val)
            images[_INDEX[name]] = val
        # fast path: every image is a constant or a single monic variable
        simple = all(len(v._t) <= 1 for v in images.values())
        out: dict[int, int] = {}
        if simple:
            for k, c in self._t.items():
                e = list(unpack(k))
                coef = c
                newk = 0
                for i, img in images.items():
                    if e[i]:
                        if not img._t:
                            coef = 0
                            break
                        (ik, ic), = img._t.items()
                        coef *= ic ** e[i]
                        newk += ik * e[i]
                        e[i] = 0
                if coef:
                    newk += pack(e)
                    out[newk] = out.get(newk, 0) + coef
            return MultiPoly(out)
        acc = ZERO
        powcache: dict[tuple[int, int], MultiPoly] = {}
        for k, c in self._t.items():
            e = list(unpack(k))
            term = MultiPoly.const(c)
            for i, img in images.items():
                if e[i]:
                    key = (i, e[i])
                    if key not in powcache:
                        powcache[key] = img ** e[i]
                    term = term * powcache[key]
                    e[i] = 0
            acc = acc + term * MultiPoly({pack(e): 1}, _trusted=True)
        return acc

    def evaluate(self, **values: int) -> int:
        out = self.substitute(values)
        if not out.is_constant():
            raise InvalidInputError(f"unbound variables {sorted(out.variables())}")
        return out.constant_term()

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {"vars": list(VARS),
                "terms": [{"e": list(e), "c": str(c)} for e, c in self.terms()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> MultiPoly:
        names = list(obj.get("vars", VARS))
        items = []
        for term in obj["terms"]:
            vec = [0] * _NVARS
            for name, e in zip(names, term["e"]):
                vec[_INDEX[name]] = int(e)
            items.append((vec, int(term["c"])))
        return cls.from_terms(items)

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e, c in self.terms():
            mono = "*".join(VARS[i] if d == 1 else f"{VARS[i]}^{d}"
                            for i, d in enumerate(e) if d)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"


ZERO = MultiPoly()
ONE = MultiPoly({0: 1}, _trusted=True)
q = MultiPoly.var("q")
p = MultiPoly.var("p")
z = MultiPoly.var("z")
x = MultiPoly.var("x")
y = MultiPoly.var("y")


def as_poly(v: Scalar) -> MultiPoly:
    return MultiPoly.const(v) if isinstance(v, int) else v


# -- p,q-analogues ---------------------------------------------------------

@lru_cache(maxsize=None)
def pq_int(n: int) -> MultiPoly:
    """[n]_{p,q} = p^{n-1} + p^{n-2} q + ... + q^{n-1}; [0]_{p,q} = 0."""
    if n < 0:
        raise InvalidInputError(f"[n]_(p,q) needs n >= 0, got {n}")
    return MultiPoly.from_terms(((i, n - 1 - i, 0, 0, 0), 1) for i in range(n))


@lru_cache(maxsize=None)
def pq_factorial(n: int) -> MultiPoly:
    if n < 0:
        raise InvalidInputError(f"factorial needs n >= 0, got {n}")
    return ONE if n == 0 else pq_factorial(n - 1) * pq_int(n)


@lru_cache(maxsize=None)
def pq_binomial(n: int, k: int) -> MultiPoly:
    if not 0 <= k <= n:
        raise InvalidInputError(f"binomial needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    return pq_factorial(n).divexact(pq_factorial(k) * pq_factorial(n - k))


def pq_multinomial(n: int, parts: Iterable[int]) -> MultiPoly:
    parts = list(parts)
    if any(b < 0 for b in parts) or sum(parts) != n:
        raise InvalidInputError(f"parts {parts} must be nonnegative and sum to {n}")
    den = ONE
    for b in parts:
        den = den * pq_factorial(b)
    return pq_factorial(n).divexact(den)


def _p_to_one(f: MultiPoly) -> MultiPoly:
    return f.substitute(p=1)


@lru_cache(maxsize=None)
def q_int(n: int) -> MultiPoly:
    return _p_to_one(pq_int(n))


@lru_cache(maxsize=None)
def q_factorial(n: int) -> MultiPoly:
    return _p_to_one(pq_factorial(n))


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> MultiPoly:
    return _p_to_one(pq_binomial(n, k))


def q_multinomial(n: int, parts: Iterable[int]) -> MultiPoly:
    return _p_to_one(pq_multinomial(n, parts))


# -- rational-coefficient plumbing for log/exp --------------------------------

class RatPoly:
    """numerator / denominator with integer denominator > 0, kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: int = 1):
        num = as_poly(num)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = den
        for c in num.raw().values():
            g = math.gcd(g, c)
            if g == 1:
                break
        if not num:
            g = den
        if g > 1:
            num, den = num.divexact(g), den // g
        self.num = num
        self.den = den

    def __add__(self, other: RatPoly) -> RatPoly:
        if not isinstance(other, RatPoly):
            other = RatPoly(other)
        g = math.gcd(self.den, other.den)
        return RatPoly(self.num * (other.den // g) + other.num * (self.den // g),
                       self.den // g * other.den)

    __radd__ = __add__

    def __neg__(self) -> RatPoly:
        return RatPoly(-self.num, self.den)

    def __sub__(self, other: RatPoly) -> RatPoly:
        return self + (-other if isinstance(other, RatPoly) else RatPoly(-as_poly(other)))

    def __mul__(self, other) -> RatPoly:
        if isinstance(other, Fraction):
            return RatPoly(self.num * other.numerator, self.den * other.denominator)
        if isinstance(other, RatPoly):
            return RatPoly(self.num * other.num, self.den * other.den)
        return RatPoly(self.num * as_poly(other), self.den)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatPoly):
            other = RatPoly(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_integral(self) -> bool:
        return self.den == 1

    def to_poly(self) -> MultiPoly:
        if self.den != 1:
            raise ConsistencyError(f"coefficient ({self.num})/{self.den} is not integral")
        return self.num

    def __repr__(self) -> str:
        return f"RatPoly(({self.num})/{self.den})"
