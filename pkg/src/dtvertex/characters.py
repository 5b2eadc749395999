"""Virtual characters of the Calabi-Yau torus {t1 t2 t3 t4 = 1}, extended by a
mass direction.

A weight is a 5-vector (a1, a2, a3, a4, a5); a5 is the mass exponent.  The
Calabi-Yau relation is imposed by always storing the representative with
a4 = 0, so two weights are equal iff their canonical forms are.
"""
from __future__ import annotations

import json
from collections import defaultdict
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

Weight = tuple  # canonical 5-tuple of ints with w[3] == 0

ZERO: Weight = (0, 0, 0, 0, 0)


class NotDivisible(ArithmeticError):
    """Raised when an exact division by (1 - t^w) factors has a remainder."""


def canonicalize(w: Sequence[int]) -> Weight:
    """Reduce a raw 5-vector modulo (1, 1, 1, 1, 0)."""
    if len(w) == 4:
        w = (*w, 0)
    a4 = w[3]
    return (w[0] - a4, w[1] - a4, w[2] - a4, 0, w[4])


def add_w(u: Weight, v: Weight) -> Weight:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2], 0, u[4] + v[4])


def neg_w(u: Weight) -> Weight:
    return (-u[0], -u[1], -u[2], 0, -u[4])


def scale_w(u: Weight, k: int) -> Weight:
    return (k * u[0], k * u[1], k * u[2], 0, k * u[4])


def is_fixed(u: Weight) -> bool:
    return u == ZERO


def axis_weight(i: int, power: int = 1) -> Weight:
    """Canonical weight of t_i^power, i in 1..4; i = 5 is the mass direction."""
    raw = [0, 0, 0, 0, 0]
    raw[i - 1] = power
    return canonicalize(raw)


def orient(u: Weight) -> tuple[Weight, int]:
    """Return (u', s) with u' = s*u and the first nonzero entry of u' positive."""
    for x in u:
        if x > 0:
            return u, 1
        if x < 0:
            return tuple(-y for y in u), -1
    return u, 1


def direction(u: Weight) -> Weight:
    """Primitive oriented direction of a nonzero weight."""
    g = reduce(gcd, (abs(x) for x in u), 0)
    v, _ = orient(tuple(x // g for x in u))
    return v


def tilde_weight(u: Weight, m: Sequence[int]) -> Weight:
    m2, m3, m4 = m
    a, b, c, d, e = u
    return canonicalize((-a - m2 * b - m3 * c - m4 * d, b, c, d, e))


def edge_frame_exponents(u: Weight) -> tuple[int, int, int]:
    """Exponents (nu2, nu3, nu4) of the unique t1-free representative of u."""
    a1, a2, a3 = u[0], u[1], u[2]
    return (a2 - a1, a3 - a1, -a1)


class CharClass:
    """Finite Z-linear combination of canonical weights.

    Values are treated as immutable once built.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | Iterable = ()):
        acc: dict = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, k in items:
            acc[canonicalize(w)] += k
        self._terms = {w: k for w, k in acc.items() if k}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> CharClass:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, w: Sequence[int], k: int = 1) -> CharClass:
        return cls({tuple(w): k})

    @classmethod
    def t(cls, i: int, power: int = 1) -> CharClass:
        return cls._raw({axis_weight(i, power): 1})

    @classmethod
    def one(cls) -> CharClass:
        return cls._raw({ZERO: 1})

    @classmethod
    def zero(cls) -> CharClass:
        return cls._raw({})

    @classmethod
    def from_boxes(cls, boxes: Iterable[Sequence[int]], axes: Sequence[int] = (1, 2, 3, 4)) -> CharClass:
        """Sum of t^box, coordinate k of each box sitting on axis axes[k]."""
        acc: dict = defaultdict(int)
        basis = [axis_weight(a) for a in axes]
        for box in boxes:
            w = ZERO
            for c, b in zip(box, basis):
                if c:
                    w = add_w(w, scale_w(b, c))
            acc[w] += 1
        return cls._raw(dict(acc))

    # container protocol

    def items(self):
        return self._terms.items()

    def weights(self):
        return self._terms.keys()

    def __getitem__(self, w) -> int:
        return self._terms.get(canonicalize(w), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CharClass({ZERO: other})
        if not isinstance(other, CharClass):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "CharClass(0)"
        parts = [f"{k:+d}*t^{list(w[:3]) + [w[4]]}" for w, k in sorted(self._terms.items())]
        return "CharClass(" + " ".join(parts) + ")"

    # ring operations

    def __add__(self, other: CharClass) -> CharClass:
        if isinstance(other, int):
            other = CharClass({ZERO: other})
        out = dict(self._terms)
        for w, k in other._terms.items():
            s = out.get(w, 0) + k
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return CharClass._raw(out)

    __radd__ = __add__

    def __neg__(self) -> CharClass:
        return CharClass._raw({w: -k for w, k in self._terms.items()})

    def __sub__(self, other: CharClass) -> CharClass:
        if isinstance(other, int):
            other = CharClass({ZERO: other})
        return self + (-other)

    def __rsub__(self, other) -> CharClass:
        return (-self) + other

    def __mul__(self, other) -> CharClass:
        if isinstance(other, int):
            if other == 0:
                return CharClass.zero()
            return CharClass._raw({w: k * other for w, k in self._terms.items()})
        acc: dict = defaultdict(int)
        for u, k in self._terms.items():
            for v, l in other._terms.items():
                acc[(u[0] + v[0], u[1] + v[1], u[2] + v[2], 0, u[4] + v[4])] += k * l
        return CharClass._raw({w: k for w, k in acc.items() if k})

    __rmul__ = __mul__

    def shift(self, u: Weight) -> CharClass:
        """Multiply by the monomial t^u."""
        return CharClass._raw({add_w(w, u): k for w, k in self._terms.items()})

    def __pow__(self, n: int) -> CharClass:
        out = CharClass.one()
        for _ in range(n):
            out = out * self
        return out

    # structure

    def rank(self) -> int:
        return sum(self._terms.values())

    def fixed_part(self) -> int:
        return self._terms.get(ZERO, 0)

    def movable_part(self) -> CharClass:
        return CharClass._raw({w: k for w, k in self._terms.items() if w != ZERO})

    def is_movable(self) -> bool:
        return ZERO not in self._terms

    def map_weights(self, f) -> CharClass:
        acc: dict = defaultdict(int)
        for w, k in self._terms.items():
            acc[f(w)] += k
        return CharClass._raw({w: k for w, k in acc.items() if k})

    def substitute(self, images: Sequence[Weight]) -> CharClass:
        """Replace t_i by t^{images[i-1]} (i = 1..4); mass is kept."""
        im = [canonicalize(x) for x in images]

        def f(w):
            out = (0, 0, 0, 0, w[4])
            for c, b in zip(w[:4], im):
                if c:
                    out = add_w(out, scale_w(b, c))
            return out

        return self.map_weights(f)

    def to_json(self) -> list:
        return [[*w, k] for w, k in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]]) -> CharClass:
        return cls((tuple(row[:5]), row[5]) for row in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def bar(V: CharClass) -> CharClass:
    """Dual representation: every weight negated."""
    return CharClass._raw({neg_w(w): k for w, k in V.items()})


def tilde(V: CharClass, m: Sequence[int]) -> CharClass:
    """Chart-transition substitution t1 -> t1^-1, t_k -> t_k t1^{-m_k}."""
    return V.map_weights(lambda w: tilde_weight(w, m))


def fixed_part(V: CharClass) -> int:
    return V.fixed_part()


def P_bar(axes: Iterable[int]) -> CharClass:
    """prod over a in axes of (1 - t_a^{-1})."""
    out = CharClass.one()
    for a in axes:
        out = out * (CharClass.one() - CharClass.t(a, -1))
    return out


# rational characters


def _divide_one(R: dict, w: Weight) -> dict:
    """Exact quotient of R by (1 - t^w), R a weight->coefficient dict."""
    p = next(i for i in (0, 1, 2, 4) if w[i])
    chains: dict = defaultdict(list)
    for u, k in R.items():
        s = u[p] // w[p]
        base = add_w(u, scale_w(w, -s))
        chains[base].append((s, k))
    out = {}
    for base, chain in chains.items():
        chain.sort()
        # q_s - q_{s-1} = r_s, q vanishes below the chain
        run = 0
        prev = None
        for s, k in chain:
            if prev is not None and run and s != prev + 1:
                for j in range(prev + 1, s):
                    out[add_w(base, scale_w(w, j))] = run
            run += k
            if run:
                out[add_w(base, scale_w(w, s))] = run
            prev = s
        if run:
            raise NotDivisible(f"nonzero remainder dividing by 1 - t^{list(w)}")
    return out


class RatChar:
    """numerator * prod(1 - t^f for f in factors) / prod(1 - t^w for w in denominator).

    ``factors`` keeps numerator factors unexpanded so that they can cancel
    against denominators before any expansion happens.
    """

    __slots__ = ("numerator", "denominator", "factors")

    def __init__(self, numerator: CharClass, denominator: Iterable[Weight] = (), factors: Iterable[Weight] = ()):
        den = tuple(sorted(canonicalize(w) for w in denominator))
        if any(is_fixed(w) for w in den):
            raise ValueError("denominator weight is T-fixed")
        self.numerator = numerator
        self.denominator = den
        self.factors = tuple(sorted(canonicalize(w) for w in factors))

    def __repr__(self) -> str:
        return f"RatChar({self.numerator!r}, den={list(self.denominator)}, factors={list(self.factors)})"

    def __mul__(self, other) -> RatChar:
        if isinstance(other, CharClass):
            return RatChar(self.numerator * other, self.denominator, self.factors)
        return RatChar(
            self.numerator * other.numerator,
            self.denominator + other.denominator,
            self.factors + other.factors,
        )

    __rmul__ = __mul__

    def __neg__(self) -> RatChar:
        return RatChar(-self.numerator, self.denominator, self.factors)

    def bar(self) -> RatChar:
        return RatChar(bar(self.numerator), [neg_w(w) for w in self.denominator], [neg_w(f) for f in self.factors])

    def reduced(self) -> RatChar:
        """Cancel numerator factors against denominators and orient denominators."""
        num = self.numerator
        factors = list(self.factors)
        den = []
        for w in self.denominator:
            if w in factors:
                factors.remove(w)
                continue
            nw = neg_w(w)
            if nw in factors:
                # (1 - t^-w) / (1 - t^w) = -t^-w
                factors.remove(nw)
                num = -num.shift(nw)
                continue
            den.append(w)
        oriented = []
        for w in den:
            v, s = orient(w)
            if s < 0:
                # 1 / (1 - t^-v) = -t^v / (1 - t^v)
                num = -num.shift(v)
            oriented.append(v)
        return RatChar(num, oriented, factors)

    def expanded_numerator(self) -> CharClass:
        out = self.numerator
        for f in self.factors:
            out = out - out.shift(f)
        return out


def ratchar(V: CharClass, *den: Weight) -> RatChar:
    return RatChar(V, den)


def divide_exact(R: RatChar) -> CharClass:
    """The Laurent polynomial Q with Q * prod(1 - t^w) = numerator.

    Denominator factors are divided out one at a time in sorted order.
    """
    R = R.reduced()
    terms = dict(R.expanded_numerator().items())
    for w in sorted(R.denominator):
        terms = _divide_one(terms, w)
    return CharClass._raw({w: k for w, k in terms.items() if k})


def multiply_out(Q: CharClass, denominator: Iterable[Weight]) -> CharClass:
    out = Q
    for w in denominator:
        out = out - out.shift(canonicalize(w))
    return out


def sum_exact(pieces: Iterable[RatChar | CharClass]) -> CharClass:
    """Sum rational characters whose total is a Laurent polynomial.

    Pieces are grouped by the directions occurring in their reduced
    denominators; factors (1 - t^w) with non-parallel w are coprime, so each
    group sums to a Laurent polynomial on its own and is divided separately.
    """
    poly = CharClass.zero()
    reduced = []
    for p in pieces:
        if isinstance(p, CharClass):
            poly = poly + p
            continue
        r = p.reduced()
        if r.denominator:
            reduced.append(r)
        else:
            poly = poly + r.expanded_numerator()

    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in reduced:
        dirs = [direction(w) for w in r.denominator]
        for d in dirs:
            parent.setdefault(d, d)
        for d in dirs[1:]:
            a, b = find(dirs[0]), find(d)
            if a != b:
                parent[a] = b

    groups: dict = defaultdict(list)
    for r in reduced:
        groups[find(direction(r.denominator[0]))].append(r)

    for key in sorted(groups):
        members = groups[key]
        common: dict = defaultdict(int)
        for r in members:
            cnt: dict = defaultdict(int)
            for w in r.denominator:
                cnt[w] += 1
            for w, c in cnt.items():
                common[w] = max(common[w], c)
        total = CharClass.zero()
        for r in members:
            missing = dict(common)
            for w in r.denominator:
                missing[w] -= 1
            extra = [w for w, c in missing.items() for _ in range(c)]
            total = total + multiply_out(r.expanded_numerator(), extra)
        den = [w for w, c in sorted(common.items()) for _ in range(c)]
        poly = poly + divide_exact(RatChar(total, den))
    return poly
