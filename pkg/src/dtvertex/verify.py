"""Exhaustive verification sweeps.

Each sweep returns a report dict {"checked": int, "failures": [...]} whose
failures carry the offending partition data in JSON form, so any failure can
be replayed directly.  Work items are produced in a fixed order and results
are reduced in that order, so reports do not depend on the worker count.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from .characters import bar
from .classes import euler, khat
from .geometry import (
    ToricGeometry,
    chi,
    chi_direct,
    default_direct_cutoff,
    enumerate_fixed_points,
    kp3,
    local_curve,
    min_chi,
    sign_patching_check,
)
from .partitions import (
    AXES,
    EMPTY_PLANE,
    CurvePartition,
    PlanePartition,
    enumerate_curve,
    enumerate_plane,
    enumerate_solid,
    renormalized_volume,
    sigma_curve,
    sigma_edge,
    sigma_point,
)
from .vertex import VertexContext, edge_full, sqrt_edge, sqrt_vertex_curve_prime, sqrt_vertex_point, vertex_full

BASE_M = ((0, -1, -1), (0, 0, -2), (1, -1, -2), (2, -2, -2))


def default_m_set() -> list[tuple]:
    """All distinct permutations of the base normal-degree triples."""
    out = set()
    for m in BASE_M:
        out |= set(itertools.permutations(m))
    return sorted(out)


def _run(fn: Callable, items: Sequence, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (8 * workers))))
    return [fn(x) for x in items]


def _merge(results: Iterable[dict]) -> dict:
    checked, failures = 0, []
    for r in results:
        checked += r["checked"]
        failures.extend(r["failures"])
    return {"checked": checked, "failures": failures}


def _signed(cls, V, s):
    return cls(-V).signed(-1 if s % 2 else 1)


def _point_job(pi) -> dict:
    failures = []
    V = vertex_full(VertexContext.of(pi))
    roots = {}
    for i in AXES:
        v = sqrt_vertex_point(pi, i)
        if v + bar(v) != V or v.fixed_part():
            failures.append({"partition": pi.to_json(), "axis": i, "reason": "not a movable square root"})
        roots[i] = v
    checked = 0
    for i, j in itertools.combinations(AXES, 2):
        checked += 1
        si, sj = sigma_point(pi, i), sigma_point(pi, j)
        for name, cls in (("euler", euler), ("khat", khat)):
            if _signed(cls, roots[i], si) != _signed(cls, roots[j], sj):
                failures.append({"partition": pi.to_json(), "axes": [i, j], "class": name})
    return {"checked": checked, "failures": failures}


def verify_vertex_signs(max_size: int, workers: int = 1) -> dict:
    """Square roots, movability and sign canonicality for point-like partitions."""
    items = [pi for n in range(1, max_size + 1) for pi in enumerate_solid(n)]
    rep = _merge(_run(_point_job, items, workers))
    rep["partitions"] = len(items)
    return rep


def _edge_job(args) -> dict:
    lam, m = args
    failures = []
    E = edge_full(lam, m)
    vals = {}
    for j in (2, 3, 4):
        e = sqrt_edge(lam, m, j)
        if e + bar(e) != E or e.fixed_part():
            failures.append({"lambda": lam.to_json(), "m": list(m), "axis": j, "reason": "not a movable square root"})
        vals[j] = _signed(euler, e, sigma_edge(lam, m, j))
    checked = 0
    for i, j in itertools.combinations((2, 3, 4), 2):
        checked += 1
        if vals[i] != vals[j]:
            failures.append({"lambda": lam.to_json(), "m": list(m), "axes": [i, j]})
    return {"checked": checked, "failures": failures}


def verify_edge_signs(max_size: int, m_set: Sequence[Sequence[int]] | None = None, workers: int = 1) -> dict:
    m_set = [tuple(m) for m in (m_set or default_m_set())]
    for m in m_set:
        if len(m) != 3 or sum(m) != -2:
            raise ValueError(f"normal degrees {m} must be three integers summing to -2")
    items = [(lam, m) for n in range(1, max_size + 1) for lam in enumerate_plane(n) for m in m_set]
    rep = _merge(_run(_edge_job, items, workers))
    rep["edges"] = len(items)
    return rep


def leg_configurations(budget: int) -> list[tuple]:
    """All 4-tuples of plane partitions with total size in 1..budget."""
    planes = {0: [EMPTY_PLANE]}
    for n in range(1, budget + 1):
        planes[n] = enumerate_plane(n)
    out = []
    for sizes in itertools.product(range(budget + 1), repeat=4):
        if 0 < sum(sizes) <= budget:
            out.extend(itertools.product(*[planes[s] for s in sizes]))
    return out


def _curve_job(pi: CurvePartition) -> dict:
    failures = []
    N0 = pi.default_cutoff()
    ref = None
    checked = 0
    for N in (N0, N0 + 1):
        ctx = VertexContext(pi, N)
        V = vertex_full(ctx)
        vals = {}
        for i in AXES:
            v = sqrt_vertex_curve_prime(ctx, i)
            if v + bar(v) != V or v.fixed_part():
                failures.append({"partition": pi.to_json(), "cutoff": N, "axis": i, "reason": "not a movable square root"})
            vals[i] = _signed(euler, v, sigma_curve(pi, i, N))
        if ref is None:
            ref = vals[1]
        for i, j in itertools.combinations(AXES, 2):
            checked += 1
            if vals[i] != vals[j]:
                failures.append({"partition": pi.to_json(), "cutoff": N, "axes": [i, j]})
        if vals[1] != ref:
            failures.append({"partition": pi.to_json(), "cutoff": N, "reason": "value changed with cut-off"})
    return {"checked": checked, "failures": failures}


def verify_curve_signs(legs_budget: int, extra_budget: int, workers: int = 1) -> dict:
    items = [pi for legs in leg_configurations(legs_budget) for pi in enumerate_curve(legs, extra_budget)]
    rep = _merge(_run(_curve_job, items, workers))
    rep["partitions"] = len(items)
    return rep


def _in_box_count(pi: CurvePartition, N: int) -> int:
    return sum(1 for b in itertools.product(range(N + 1), repeat=4) if b in pi)


def sample_curve_partitions(count: int, seed: int = 0, legs_budget: int = 3, extra_budget: int = 3) -> list:
    pool = [pi for legs in leg_configurations(legs_budget) for pi in enumerate_curve(legs, extra_budget)]
    rng = random.Random(seed)
    return rng.sample(pool, min(count, len(pool)))


def verify_chi(samples: int = 100, seed: int = 0, d_max: int = 2, n_max: int = 3,
               m_set: Sequence[Sequence[int]] | None = None) -> dict:
    """Renormalized volumes against raw box counts, and chi(O_Z) against Cech counts."""
    checked, failures = 0, []
    for pi in sample_curve_partitions(samples, seed):
        N = pi.default_cutoff()
        legsize = sum(len(l) for l in pi.legs)
        for M in (N, N + 1):
            checked += 1
            if renormalized_volume(pi) != _in_box_count(pi, M) - (M + 1) * legsize:
                failures.append({"partition": pi.to_json(), "cutoff": M})
    for m in [tuple(x) for x in (m_set or default_m_set())]:
        g = local_curve(m)
        for d in range(1, d_max + 1):
            for n in range(min_chi(g, d), n_max + 1):
                for fp in enumerate_fixed_points(g, n, d):
                    N = default_direct_cutoff(g, fp)
                    for M in (N, N + 1):
                        checked += 1
                        if not (chi(g, fp) == n == chi_direct(g, fp, M)):
                            failures.append({"m": list(m), "n": n, "fixed_point": fp.to_json(), "cutoff": M})
    return {"checked": checked, "failures": failures}


def verify_sign_patching(n_max: int = 2, d_max: int = 1, g: ToricGeometry | None = None) -> dict:
    g = g or kp3()
    checked, failures, cases = 0, [], []
    for n in range(1, n_max + 1):
        for d in itertools.product(range(d_max + 1), repeat=len(g.edges)):
            if sum(d) > d_max:
                continue
            r = sign_patching_check(g, n, d)
            checked += r["checked"]
            failures.extend(r["failures"])
            cases.append({"n": n, "d": list(d), "checked": r["checked"]})
    return {"checked": checked, "failures": failures, "cases": cases}


def dimension_reduction_failures(max_size: int) -> tuple[int, list]:
    """sigma_i(pi) = |pi| whenever pi lies in the hyperplane x_i = 0."""
    checked, failures = 0, []
    for n in range(1, max_size + 1):
        for pi in enumerate_solid(n):
            for i in AXES:
                if all(b[i - 1] == 0 for b in pi.boxes):
                    checked += 1
                    if sigma_point(pi, i) != len(pi):
                        failures.append({"partition": pi.to_json(), "axis": i})
    return checked, failures


__all__ = [
    "default_m_set",
    "leg_configurations",
    "verify_vertex_signs",
    "verify_edge_signs",
    "verify_curve_signs",
    "verify_chi",
    "verify_sign_patching",
    "sample_curve_partitions",
    "dimension_reduction_failures",
]
