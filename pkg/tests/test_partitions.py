import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtvertex.partitions import (
    AXES,
    EMPTY_PLANE,
    CurvePartition,
    PlanePartition,
    SolidPartition,
    char_of,
    enumerate_curve,
    enumerate_plane,
    enumerate_solid,
    f_m,
    is_downward_closed,
    renormalized_volume,
    sigma_curve,
    sigma_edge,
    sigma_point,
)
from dtvertex.characters import CharClass
from dtvertex.verify import leg_configurations

from oracles_partitions import addable_boxes_near_cylinders, count_by_closure, count_by_subsets

ONE = PlanePartition({(0, 0, 0)})
E = EMPTY_PLANE


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 10), (4, 26)])
def test_solid_counts_subset_oracle(n, count):
    assert len(enumerate_solid(n)) == count == count_by_subsets(4, n)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 6), (4, 13), (5, 24)])
def test_plane_counts_subset_oracle(n, count):
    assert len(enumerate_plane(n)) == count == count_by_subsets(3, n)


def test_counts_closure_oracle():
    assert [len(enumerate_solid(n)) for n in range(1, 7)] == [count_by_closure(4, n) for n in range(1, 7)]
    assert [len(enumerate_plane(n)) for n in range(1, 7)] == [count_by_closure(3, n) for n in range(1, 7)]


def test_enumeration_is_closed_and_unique():
    for n in range(1, 6):
        sols = enumerate_solid(n)
        assert all(is_downward_closed(p.boxes) and len(p) == n for p in sols)
        assert len({p.boxes for p in sols}) == len(sols)


def test_curve_enumeration_examples():
    assert len(enumerate_curve((E, E, E, E), 2)) == 6
    only = enumerate_curve((ONE, E, E, E), 0)
    assert len(only) == 1 and not only[0].extra
    pi0 = only[0]
    brute = addable_boxes_near_cylinders(pi0.__contains__, 3)
    got = enumerate_curve((ONE, E, E, E), 1)[1:]
    assert sorted(next(iter(p.extra)) for p in got) == sorted(brute)


def test_curve_enumeration_matches_point_like():
    got = enumerate_curve((E, E, E, E), 3)
    want = [p.boxes for n in range(4) for p in (enumerate_solid(n) if n else [SolidPartition()])]
    assert sorted(map(sorted, (p.extra for p in got))) == sorted(map(sorted, want))


@pytest.mark.parametrize("legs", [(ONE, E, E, E), (ONE, ONE, E, E), (E, PlanePartition({(0, 0, 0), (1, 0, 0)}), ONE, E)])
def test_curve_enumeration_brute_force(legs):
    # every curve partition with k extra boxes arises from one with k-1 by adding an addable box
    level = {frozenset()}
    base = CurvePartition(legs)
    for k in range(1, 3):
        nxt = set()
        for S in level:
            pi = CurvePartition(legs, S)
            for b in addable_boxes_near_cylinders(pi.__contains__, base.default_cutoff() + 2):
                nxt.add(S | {b})
        level = nxt
        got = {p.extra for p in enumerate_curve(legs, k) if len(p.extra) == k}
        assert got == level


def test_renormalized_volume_examples():
    assert renormalized_volume(CurvePartition((ONE, E, E, E))) == 0
    assert renormalized_volume(SolidPartition({(0, 0, 0, 0), (1, 0, 0, 0)}).as_curve()) == 2
    assert renormalized_volume(CurvePartition((ONE, ONE, E, E))) == -1


def test_renormalized_volume_stable():
    for legs in leg_configurations(3):
        for pi in enumerate_curve(legs, 1):
            N = pi.default_cutoff()
            assert renormalized_volume(pi, N) == renormalized_volume(pi, N + 3)


def test_f_m_examples():
    assert f_m(ONE, (2, -2, -2)) == 1
    assert f_m(PlanePartition({(0, 0, 0), (0, 0, 1)}), (-1, -1, 0)) == 2
    assert f_m(PlanePartition({(0, 0, 0), (1, 0, 0)}), (-1, -1, 0)) == 3


def test_sigma_point_examples():
    assert sigma_point(SolidPartition({(0, 0, 0, 0)}), 4) == 1
    assert sigma_point(SolidPartition({(0, 0, 0, 0), (0, 0, 0, 1)}), 4) == 3
    assert sigma_point(SolidPartition({(0, 0, 0, 0), (1, 0, 0, 0)}), 4) == 2


def test_sigma_curve_examples():
    for pi in enumerate_solid(3):
        for i in AXES:
            assert sigma_curve(pi.as_curve(), i) == sigma_point(pi, i)
    assert sigma_curve(CurvePartition((E, E, E, ONE)), 4) == 0
    assert sigma_curve(CurvePartition((ONE, E, E, E)), 4) == 0


def test_sigma_edge_examples():
    assert sigma_edge(ONE, (-1, -1, 0), 4) == 1
    assert sigma_edge(ONE, (-1, -1, 0), 3) == 0
    assert sigma_edge(PlanePartition({(0, 0, 0), (0, 0, 1)}), (-1, -1, 0), 4) == 3


def test_dimensional_reduction_curves():
    checked = 0
    for legs in leg_configurations(2):
        for pi in enumerate_curve(legs, 2):
            boxes = pi.truncated(pi.default_cutoff())
            for i in AXES:
                if pi.legs[i - 1] or any(b[i - 1] for b in boxes):
                    continue
                checked += 1
                assert sigma_curve(pi, i) == renormalized_volume(pi)
    assert checked > 100


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.sampled_from(enumerate_solid(n))), st.permutations([1, 2, 3, 4]))
def test_sigma_point_s4_equivariant(pi, g):
    gp = pi.permuted(g)
    for i in AXES:
        assert sigma_point(pi, i) == sigma_point(gp, g[i - 1])


def test_char_of():
    assert char_of(SolidPartition({(0, 0, 0, 0)})) == CharClass.one()
    lam = PlanePartition({(0, 0, 0), (1, 0, 0)})
    assert char_of(lam, 1) == CharClass.one() + CharClass.t(2)
    assert char_of(lam, 2) == CharClass.one() + CharClass.t(1)
    assert char_of(ONE, 2) == CharClass.one()


def test_json_roundtrip_and_validation():
    for p in enumerate_plane(4):
        assert PlanePartition.from_json(p.to_json()) == p
    for p in enumerate_solid(3):
        assert SolidPartition.from_json(p.to_json()) == p
    for p in enumerate_curve((ONE, ONE, E, E), 2):
        assert CurvePartition.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        PlanePartition.from_json([[1, 0, 0]])
    with pytest.raises(ValueError):
        CurvePartition.from_json({"legs": [[[0, 0, 0]], [], [], []], "extra": [[0, 2, 0, 0]]})
    with pytest.raises(ValueError):
        CurvePartition((ONE, E, E, E), {(5, 0, 0, 0)})
