"""Euler-type classes of movable characters, kept in factored form.

Three functors are provided: the cohomological Euler class (a product of
linear forms in l1, l2, l3 and the mass m, with l4 = -l1-l2-l3), the
K-theoretic bracket [t^w] = t^{w/2} - t^{-w/2}, and a truncated elliptic
refinement built from the theta and eta products.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable

from sympy import QQ

from .characters import CharClass, Weight, neg_w, orient
from .rational import COHOMOLOGICAL_VARS, K_THEORY_VARS, RationalFunction, poly_ring

COHOMOLOGICAL = "cohomological"
K_THEORETIC = "k-theoretic"


class FixedPartPresent(ValueError):
    """Euler-type class requested for a character with a T-fixed summand."""


def _linear_form(w: Weight) -> tuple[int, int, int, int]:
    # a4 = 0 in canonical form, so l4 never appears
    return (w[0], w[1], w[2], w[4])


@dataclass(frozen=True)
class FactoredClass:
    """sign * scalar * prod(factor ** exponent).

    Cohomological factors are primitive integer linear forms (content 1,
    first nonzero coefficient positive); k-theoretic factors are oriented
    weights standing for brackets [t^w].
    """

    mode: str
    sign: int = 1
    scalar: Fraction = Fraction(1)
    factors: tuple = ()

    @classmethod
    def one(cls, mode: str) -> FactoredClass:
        return cls(mode)

    def __mul__(self, other: FactoredClass) -> FactoredClass:
        if other.mode != self.mode:
            raise ValueError("cannot multiply classes of different modes")
        acc = defaultdict(int, self.factors)
        for f, e in other.factors:
            acc[f] += e
        return FactoredClass(
            self.mode,
            self.sign * other.sign,
            self.scalar * other.scalar,
            tuple(sorted((f, e) for f, e in acc.items() if e)),
        )

    def inverse(self) -> FactoredClass:
        return FactoredClass(self.mode, self.sign, 1 / self.scalar, tuple((f, -e) for f, e in self.factors))

    def signed(self, s: int) -> FactoredClass:
        return FactoredClass(self.mode, self.sign * s, self.scalar, self.factors)

    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def to_rational(self) -> RationalFunction:
        return sum_classes([self])

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "sign": self.sign,
            "scalar": [self.scalar.numerator, self.scalar.denominator],
            "factors": [[list(f), e] for f, e in self.factors],
        }


def _factor_poly(mode: str, f, R):
    """(numerator, denominator) ring elements representing one factor."""
    if mode == COHOMOLOGICAL:
        l1, l2, l3, m = R.gens
        return f[0] * l1 + f[1] * l2 + f[2] * l3 + f[3] * m, R.one
    # [t^w] with s_i^2 = t_i: (s^{2w+} - s^{2w-}) / s^{w+ + w-}
    w = (f[0], f[1], f[2], f[4])
    pos = tuple(max(x, 0) for x in w)
    neg = tuple(max(-x, 0) for x in w)
    num = R({tuple(2 * x for x in pos): 1}) - R({tuple(2 * x for x in neg): 1})
    den = R({tuple(p + q for p, q in zip(pos, neg)): 1})
    return num, den


def vars_for(mode: str) -> tuple[str, ...]:
    return COHOMOLOGICAL_VARS if mode == COHOMOLOGICAL else K_THEORY_VARS


def sum_classes(classes: Iterable[FactoredClass], mode: str | None = None) -> RationalFunction:
    """Expand and add factored classes over the lcm of their factor denominators."""
    classes = list(classes)
    if mode is None:
        if not classes:
            raise ValueError("mode required for an empty sum")
        mode = classes[0].mode
    R = poly_ring(vars_for(mode))
    if not classes:
        return RationalFunction(R.zero, R.one)
    lcm: dict = defaultdict(int)
    for c in classes:
        for f, e in c.factors:
            if e < 0:
                lcm[f] = max(lcm[f], -e)
    cache = {}

    def fp(f):
        if f not in cache:
            cache[f] = _factor_poly(mode, f, R)
        return cache[f]

    num = R.zero
    mono_den = R.one
    terms = []
    for c in classes:
        acc = defaultdict(int, c.factors)
        for f, k in lcm.items():
            acc[f] += k
        n, d = R(c.sign) * R(QQ_frac(c.scalar)), R.one
        for f, e in sorted(acc.items()):
            if e:
                a, b = fp(f)
                n *= a**e
                d *= b**e
        terms.append((n, d))
    # k-theoretic factor denominators are monomials; bring them to a common one
    for _, d in terms:
        if d != mono_den:
            mono_den = mono_den.lcm(d)
    for n, d in terms:
        num += n * mono_den.exquo(d)
    den = mono_den
    for f, k in sorted(lcm.items()):
        a, b = fp(f)
        den *= a**k
        num *= b**k
    return RationalFunction(num, den)


def QQ_frac(x: Fraction):
    return QQ(x.numerator, x.denominator)


def _require_movable(V: CharClass) -> None:
    if V.fixed_part():
        raise FixedPartPresent(f"character has fixed part of rank {V.fixed_part()}")


def euler(V: CharClass) -> FactoredClass:
    """Cohomological equivariant Euler class of a movable character."""
    _require_movable(V)
    sign = 1
    scalar = Fraction(1)
    acc: dict = defaultdict(int)
    for w, k in V.items():
        form = _linear_form(w)
        g = reduce(gcd, (abs(x) for x in form))
        prim = tuple(x // g for x in form)
        oriented, s = orient(prim)
        acc[oriented] += k
        scalar *= Fraction(g) ** k
        if s < 0 and k % 2:
            sign = -sign
    return FactoredClass(COHOMOLOGICAL, sign, scalar, tuple(sorted((f, e) for f, e in acc.items() if e)))


def khat(V: CharClass) -> FactoredClass:
    """K-theoretic bracket class: product of [t^w] = t^{w/2} - t^{-w/2}."""
    _require_movable(V)
    sign = 1
    acc: dict = defaultdict(int)
    for w, k in V.items():
        oriented, s = orient(w)
        acc[oriented] += k
        if s < 0 and k % 2:
            sign = -sign
    return FactoredClass(K_THEORETIC, sign, Fraction(1), tuple(sorted((f, e) for f, e in acc.items() if e)))


def characteristic_class(V: CharClass, mode: str) -> FactoredClass:
    if mode == COHOMOLOGICAL:
        return euler(V)
    if mode == K_THEORETIC:
        return khat(V)
    raise ValueError(f"unknown mode {mode!r}")


# elliptic refinement


def _series_mul(a: tuple, b: tuple, P: int) -> tuple:
    out = [CharClass.zero() for _ in range(P + 1)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(P + 1 - i):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return tuple(out)


def _series_inv(a: tuple, P: int) -> tuple:
    # a[0] == 1
    out = [CharClass.one()] + [CharClass.zero() for _ in range(P)]
    for n in range(1, P + 1):
        acc = CharClass.zero()
        for j in range(1, n + 1):
            if a[j] and out[n - j]:
                acc = acc + a[j] * out[n - j]
        out[n] = -acc
    return tuple(out)


def _phi(w: Weight, P: int) -> tuple:
    """prod_{n>=1} (1 - t^w p^n)(1 - t^-w p^n) truncated at p^P."""
    one = CharClass.one()
    series = (one,) + tuple(CharClass.zero() for _ in range(P))
    y = CharClass.monomial(w)
    yi = CharClass.monomial(neg_w(w))
    for n in range(1, P + 1):
        fac = [CharClass.zero() for _ in range(P + 1)]
        fac[0] = one
        fac[n] = -(y + yi)
        if 2 * n <= P:
            fac[2 * n] = one
        series = _series_mul(series, tuple(fac), P)
    return series


@dataclass(frozen=True)
class ThetaClass:
    """p^{p_exponent} * bracket * (series[0] + series[1] p + ... + series[P] p^P).

    With theta[t^w] = (i eta(p))^{-1} theta(p; t^w) one gets
    theta[t^w] = -p^{1/12} [t^w] prod_{n>=1} (1 - t^w p^n)(1 - t^-w p^n);
    the overall sign (-1)^rank is stored in ``bracket.sign``.
    """

    order: int
    p_exponent: Fraction
    bracket: FactoredClass
    series: tuple

    def __mul__(self, other: ThetaClass) -> ThetaClass:
        P = min(self.order, other.order)
        return ThetaClass(
            P,
            self.p_exponent + other.p_exponent,
            self.bracket * other.bracket,
            _series_mul(self.series[: P + 1], other.series[: P + 1], P),
        )

    def signed(self, s: int) -> ThetaClass:
        return ThetaClass(self.order, self.p_exponent, self.bracket.signed(s), self.series)

    def truncate(self, P: int) -> ThetaClass:
        if P > self.order:
            raise ValueError("cannot extend a truncated series")
        return ThetaClass(P, self.p_exponent, self.bracket, self.series[: P + 1])

    def coefficient(self, k: int, extra: CharClass | None = None) -> RationalFunction:
        """Coefficient of p^{p_exponent + k} as a rational function in s1, s2, s3, sm."""
        c = self.series[k] if extra is None else self.series[k] * extra
        return self.bracket.to_rational() * laurent_to_rational(c)


def laurent_to_rational(V: CharClass) -> RationalFunction:
    """Laurent polynomial in t, written in s = t^{1/2} variables."""
    R = poly_ring(K_THEORY_VARS)
    num = R.zero
    shift = [0, 0, 0, 0]
    for w, _ in V.items():
        for i, x in enumerate((w[0], w[1], w[2], w[4])):
            shift[i] = max(shift[i], -2 * x)
    for w, k in V.items():
        e = tuple(2 * x + s for x, s in zip((w[0], w[1], w[2], w[4]), shift))
        num += R({e: k})
    return RationalFunction(num, R({tuple(shift): 1}))


def theta(V: CharClass, P: int) -> ThetaClass:
    """Elliptic class of a movable character, truncated at p^P."""
    _require_movable(V)
    if P < 0:
        raise ValueError("truncation order must be nonnegative")
    series = (CharClass.one(),) + tuple(CharClass.zero() for _ in range(P))
    for w, k in sorted(V.items()):
        oriented, _ = orient(w)
        phi = _phi(oriented, P)
        if k < 0:
            phi = _series_inv(phi, P)
        for _ in range(abs(k)):
            series = _series_mul(series, phi, P)
    r = V.rank()
    return ThetaClass(P, Fraction(r, 12), khat(V).signed(-1 if r % 2 else 1), series)
