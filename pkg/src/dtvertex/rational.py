"""Exact multivariate rational functions over Q.

Polynomials are sympy sparse ring elements.  Equality is always decided by
cross-multiplication; gcd is only used to keep sums small.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.rings import ring

COHOMOLOGICAL_VARS = ("l1", "l2", "l3", "m")
# s_i^2 = t_i and sm^2 is the mass parameter
K_THEORY_VARS = ("s1", "s2", "s3", "sm")


@lru_cache(maxsize=None)
def poly_ring(names: tuple[str, ...] = COHOMOLOGICAL_VARS):
    R, *_ = ring(",".join(names), QQ)
    return R


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = num.ring.one
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def zero(cls, names=COHOMOLOGICAL_VARS) -> RationalFunction:
        R = poly_ring(tuple(names))
        return cls(R.zero, R.one)

    @classmethod
    def constant(cls, c, names=COHOMOLOGICAL_VARS) -> RationalFunction:
        R = poly_ring(tuple(names))
        return cls(R(QQ(Fraction(c).numerator, Fraction(c).denominator)), R.one)

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RationalFunction.constant(other, tuple(str(g) for g in self.ring.gens))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __add__(self, other: RationalFunction) -> RationalFunction:
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        a = self.den.exquo(g)
        b = other.den.exquo(g)
        return RationalFunction(self.num * b + other.num * a, a * other.den)

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return self + (-other)

    def __mul__(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return RationalFunction(self.num * other.num, self.den * other.den)
        return RationalFunction(self.num * other, self.den)

    def __truediv__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.num * other.den, self.den * other.num)

    def is_zero(self) -> bool:
        return self.num == 0

    def cancelled(self) -> RationalFunction:
        if self.num == 0:
            return RationalFunction(self.num, self.ring.one)
        p, q = self.num.cancel(self.den)
        lc = q.LC
        return RationalFunction(p.quo_ground(lc), q.quo_ground(lc))

    def subs_linear(self, images) -> RationalFunction:
        """Substitute each generator by the given ring element."""
        return RationalFunction(self.num.compose(list(zip(self.ring.gens, images))),
                                self.den.compose(list(zip(self.ring.gens, images))))

    def evaluate(self, point) -> Fraction:
        n = self.num.evaluate(list(zip(self.ring.gens, point)))
        d = self.den.evaluate(list(zip(self.ring.gens, point)))
        return Fraction(int(n.numerator), int(n.denominator)) / Fraction(int(d.numerator), int(d.denominator))

    def text(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"vars": [str(g) for g in self.ring.gens], "num": poly_to_json(self.num), "den": poly_to_json(self.den)}

    @classmethod
    def from_json(cls, data: dict) -> RationalFunction:
        R = poly_ring(tuple(data["vars"]))
        return cls(poly_from_json(R, data["num"]), poly_from_json(R, data["den"]))


def poly_to_json(p) -> list:
    return [[list(e), int(c.numerator), int(c.denominator)] for e, c in sorted(p.terms())]


def poly_from_json(R, rows):
    out = R.zero
    for e, a, b in rows:
        out += R({tuple(e): QQ(a, b)})
    return out
