import itertools
from fractions import Fraction

import pytest

from dtvertex.characters import P_bar, bar
from dtvertex.classes import K_THEORETIC
from dtvertex.geometry import (
    ELLIPTIC,
    Edge,
    Insertion,
    InvalidGeometry,
    ToricGeometry,
    assemble_tvir,
    build_geometry,
    c4,
    check_fixed_point,
    chi,
    chi_direct,
    default_direct_cutoff,
    dt_invariant,
    dt_series,
    enumerate_fixed_points,
    half_tvir,
    kp3,
    local_curve,
    min_chi,
    sign_patching_check,
)
from dtvertex.partitions import AXES
from dtvertex.rational import COHOMOLOGICAL_VARS, RationalFunction, poly_ring
from dtvertex.verify import default_m_set
from dtvertex.vertex import edge_full

R = poly_ring(COHOMOLOGICAL_VARS)
l1, l2, l3, m = R.gens


def test_builtin_shapes():
    assert (c4().n_vertices, len(c4().edges)) == (1, 0)
    g = local_curve((-1, -1, 0))
    assert (g.n_vertices, len(g.edges)) == (2, 1)
    k = kp3()
    assert (k.n_vertices, len(k.edges)) == (4, 6)
    assert all(e.m == (1, 1, -4) for e in k.edges)


def test_build_from_json():
    assert build_geometry({"kind": "LocalCurve", "m": [0, -1, -1]}).edges[0].m == (0, -1, -1)
    g = build_geometry({"kind": "custom", "edges": [{"alpha": 0, "axis_alpha": 2, "beta": 1, "axis_beta": 2,
                                                      "m": [-1, 0, -1], "frame_alpha": [1, 3, 4], "frame_beta": [1, 3, 4]}]})
    assert g.n_vertices == 2
    again = build_geometry(g.to_json())
    assert again.charts == g.charts and again.edges == g.edges
    assert build_geometry(kp3().to_json()).charts == kp3().charts


@pytest.mark.parametrize("spec", [
    {"kind": "LocalCurve", "m": [0, 0, 0]},
    {"kind": "nowhere"},
    {"kind": "C4", "extra": 1},
    {"kind": "custom", "edges": [{"alpha": 0, "axis_alpha": 1, "beta": 1, "axis_beta": 1, "m": [-1, -1, 0],
                                  "frame_alpha": [2, 3, 3]}]},
])
def test_invalid_geometries(spec):
    with pytest.raises(InvalidGeometry):
        build_geometry(spec)


def test_inconsistent_matching_detected():
    g = local_curve((-1, -1, 0))
    bad = Edge(0, 1, 1, 1, (-1, -1, 0), (2, 3, 4), (3, 2, 4))
    with pytest.raises(InvalidGeometry):
        ToricGeometry("bad", g.charts, (bad,))


def test_kp3_cycle_closes():
    spec = kp3().to_json()
    del spec["charts"]
    assert build_geometry(spec).charts == kp3().charts


def test_fixed_point_counts():
    assert len(enumerate_fixed_points(c4(), 2)) == 4
    g = local_curve((-1, -1, 0))
    fps = enumerate_fixed_points(g, 1, 1)
    assert len(fps) == 1
    assert all(not p.extra for p in fps[0].vertices)
    assert enumerate_fixed_points(g, min_chi(g, 1) - 1, 1) == []


def test_assemble_tvir():
    fp = enumerate_fixed_points(c4(), 1)[0]
    assert assemble_tvir(c4(), fp) == 2 - P_bar((1, 2, 3, 4))
    for n in range(1, 5):
        for fp in enumerate_fixed_points(c4(), n):
            T = assemble_tvir(c4(), fp)
            assert T.fixed_part() == 0 and T.rank() == 2 * n


def test_local_curve_fixed_points():
    for mm in default_m_set():
        g = local_curve(mm)
        for d in (1, 2):
            for n in range(min_chi(g, d), min_chi(g, d) + 2):
                for fp in enumerate_fixed_points(g, n, d):
                    check_fixed_point(g, fp)
                    T = assemble_tvir(g, fp)
                    assert T.fixed_part() == 0
                    v, _ = half_tvir(g, fp)
                    assert v + bar(v) == T
                    N = default_direct_cutoff(g, fp)
                    assert chi(g, fp) == n == chi_direct(g, fp, N) == chi_direct(g, fp, N + 1)


def test_edge_term_same_from_both_ends():
    for mm in default_m_set():
        g = local_curve(mm)
        cb = g.charts[1]
        for lam in enumerate_plane_upto(3):
            a = edge_full(lam, mm).substitute(g.edge_images(0))
            b = edge_full(lam, mm).substitute([cb[0], cb[1], cb[2], cb[3]])
            assert a == b


def enumerate_plane_upto(n):
    from dtvertex.partitions import enumerate_plane

    return [p for k in range(1, n + 1) for p in enumerate_plane(k)]


def test_c4_n1_closed_form():
    r = dt_invariant(c4(), 1)
    assert r.terms == 1
    assert r.value == RationalFunction((l1 + l2) * (l1 + l3) * (l2 + l3), l1 * l2 * l3 * (l1 + l2 + l3))


def test_c4_degree_and_exponential_shape():
    d1 = dt_invariant(c4(), 1).value
    for n in (2, 3):
        v = dt_invariant(c4(), n).value
        # homogeneous of degree -n
        assert v.subs_linear([2 * l1, 2 * l2, 2 * l3, 2 * m]) == v * RationalFunction(R(1), R(2 ** n))
    # the unit-insertion series is exp(DT_1 q) through q^3
    assert dt_invariant(c4(), 2).value == d1 * d1 * RationalFunction(R(1), R(2))
    assert dt_invariant(c4(), 3).value == d1 * d1 * d1 * RationalFunction(R(1), R(6))


@pytest.mark.parametrize("mm", [(-1, -1, 0), (1, -1, -2), (2, -2, -2), (0, 0, -2)])
def test_local_curve_axis_independence(mm):
    g = local_curve(mm)
    for n in range(min_chi(g, 1), min_chi(g, 1) + 2):
        ref = dt_invariant(g, n, 1).value
        for va in itertools.product(AXES, repeat=2):
            for ea in (2, 3, 4):
                assert dt_invariant(g, n, 1, vertex_axes=va, edge_axes=ea).value == ref
        assert dt_invariant(g, n, 1, cutoff_shift=1).value == ref


def test_parallel_matches_serial():
    a = dt_invariant(c4(), 3, workers=1)
    b = dt_invariant(c4(), 3, workers=2)
    assert a.to_json() == b.to_json()


def test_dt_series():
    rs = dt_series(c4(), None, 3)
    assert [r.terms for r in rs] == [1, 4, 10]
    assert dt_series(c4(), None, 0) == []


def test_empty_fixed_point_set():
    g = local_curve((-1, -1, 0))
    r = dt_invariant(g, min_chi(g, 1) - 1, 1)
    assert r.terms == 0 and r.value.is_zero()


def test_mass_insertion_only_on_c4():
    with pytest.raises(InvalidGeometry):
        dt_invariant(local_curve((-1, -1, 0)), 1, 1, Insertion("mass", K_THEORETIC))


def test_mass_insertion_cohomological_n1():
    # the mass insertion contributes e(mu) = m
    r = dt_invariant(c4(), 1, ins=Insertion("mass"))
    assert r.value == RationalFunction((l1 + l2) * (l1 + l3) * (l2 + l3) * m, l1 * l2 * l3 * (l1 + l2 + l3))


def test_elliptic_leading_term():
    P = 2
    for ins_kind in ("unit", "mass"):
        ell = dt_invariant(c4(), 2, ins=Insertion(ins_kind, ELLIPTIC, P))
        kth = dt_invariant(c4(), 2, ins=Insertion(ins_kind, K_THEORETIC))
        rank = -2 + (2 if ins_kind == "mass" else 0)
        assert ell.p_exponent == Fraction(rank, 12)
        assert ell.series[0] == kth.value * (1 if rank % 2 == 0 else -1)
        assert len(ell.series) == P + 1


def test_sign_patching_examples():
    k = kp3()
    r = sign_patching_check(k, 1, (0,) * 6)
    assert r["expected"] == -1 and r["checked"] == 4 and not r["failures"]
    r = sign_patching_check(k, 1, (1, 0, 0, 0, 0, 0))
    assert r["expected"] == -1 and r["checked"] == 1 and not r["failures"]
    r = sign_patching_check(k, 2, (0,) * 6)
    assert r["expected"] == 1 and not r["failures"]
    with pytest.raises(InvalidGeometry):
        sign_patching_check(c4(), 1, ())


def test_result_json():
    j = dt_invariant(c4(), 1, log=True).to_json()
    assert j["terms"] == 1 and len(j["per_point"]) == 1
    assert RationalFunction.from_json(j["value"]) == dt_invariant(c4(), 1).value
