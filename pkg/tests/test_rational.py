from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtvertex.rational import COHOMOLOGICAL_VARS, RationalFunction, poly_ring

R = poly_ring(COHOMOLOGICAL_VARS)
l1, l2, l3, m = R.gens
atoms = st.sampled_from([l1, l2, l3, m, l1 + l2, l2 - l3, R(2), R(-3)])
polys = st.lists(atoms, min_size=1, max_size=4).map(lambda xs: sum(xs[1:], xs[0]) * xs[0])
nonzero = polys.filter(lambda p: p != 0)


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RationalFunction(l1, R.zero)


def test_cross_multiplication_equality():
    assert RationalFunction(l1 * l2, l2 * l3) == RationalFunction(l1, l3)
    assert RationalFunction(l1, l2) != RationalFunction(l2, l1)
    assert RationalFunction(R(2), R(2)) == 1


@given(polys, nonzero, polys, nonzero)
def test_field_laws(a, b, c, d):
    x, y = RationalFunction(a, b), RationalFunction(c, d)
    assert x + y == y + x
    assert (x + y) - y == x
    assert x * y == y * x
    if c != 0:
        assert (x / y) * y == x


@given(polys, nonzero)
def test_cancelled_and_json(a, b):
    x = RationalFunction(a, b)
    assert x.cancelled() == x
    assert RationalFunction.from_json(x.to_json()) == x


def test_evaluate_and_substitute():
    x = RationalFunction(l1 + l2, l3)
    assert x.evaluate([1, 2, 3, 0]) == 1
    y = x.subs_linear([l2, l1, l3, m])
    assert y == x
    assert RationalFunction(l1, l2 + 1).evaluate([Fraction(1, 2), 1, 0, 0]) == Fraction(1, 4)
