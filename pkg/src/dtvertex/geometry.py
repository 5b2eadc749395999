"""Toric CY4 graphs, their fixed points and the localized DT sums.

A chart is recorded as the four global weights of its local coordinates.
An edge is recorded in its own frame: direction 1 runs along the edge and
directions 2, 3, 4 are the normal lines with degrees m = (m2, m3, m4).
``frame_alpha``/``frame_beta`` say which chart axes carry those normal
directions at the two ends.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .characters import CharClass, Weight, add_w, axis_weight, canonicalize, is_fixed, neg_w, scale_w
from .classes import (
    COHOMOLOGICAL,
    K_THEORETIC,
    FactoredClass,
    ThetaClass,
    characteristic_class,
    sum_classes,
    theta,
    vars_for,
)
from .partitions import (
    AXES,
    CurvePartition,
    PlanePartition,
    SolidPartition,
    char_of,
    enumerate_plane,
    f_m,
    iter_curve,
    renormalized_volume,
    sigma_curve,
    sigma_edge,
    transverse_axes,
)
from .rational import RationalFunction
from .vertex import VertexContext, edge_full, sqrt_edge, sqrt_vertex_curve_prime, sqrt_vertex_point, vertex_full

ELLIPTIC = "elliptic"
MASS = (0, 0, 0, 0, 1)


class InvalidGeometry(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    alpha: int
    axis_alpha: int
    beta: int
    axis_beta: int
    m: tuple
    frame_alpha: tuple = (2, 3, 4)
    frame_beta: tuple = (2, 3, 4)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "axis_alpha": self.axis_alpha,
            "beta": self.beta,
            "axis_beta": self.axis_beta,
            "m": list(self.m),
            "frame_alpha": list(self.frame_alpha),
            "frame_beta": list(self.frame_beta),
        }

    @classmethod
    def from_json(cls, d: dict) -> Edge:
        unknown = set(d) - {"alpha", "axis_alpha", "beta", "axis_beta", "m", "frame_alpha", "frame_beta"}
        if unknown:
            raise InvalidGeometry(f"unknown edge fields {sorted(unknown)}")
        try:
            return cls(
                int(d["alpha"]),
                int(d["axis_alpha"]),
                int(d["beta"]),
                int(d["axis_beta"]),
                tuple(int(x) for x in d["m"]),
                tuple(int(x) for x in d.get("frame_alpha", (2, 3, 4))),
                tuple(int(x) for x in d.get("frame_beta", (2, 3, 4))),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidGeometry(f"malformed edge {d}: {e}") from None


def transport_chart(chart: Sequence[Weight], e: Edge) -> list:
    """Weights of the beta chart forced by the alpha chart and the edge data."""
    wa = chart[e.axis_alpha - 1]
    out: list = [None] * 4
    out[e.axis_beta - 1] = neg_w(wa)
    for k, mk in enumerate(e.m):
        out[e.frame_beta[k] - 1] = add_w(chart[e.frame_alpha[k] - 1], scale_w(wa, -mk))
    return out


@dataclass(frozen=True)
class ToricGeometry:
    name: str
    charts: tuple
    edges: tuple = ()

    def __post_init__(self):
        charts = tuple(tuple(canonicalize(w) for w in c) for c in self.charts)
        object.__setattr__(self, "charts", charts)
        object.__setattr__(self, "edges", tuple(self.edges))
        self.validate()

    @property
    def n_vertices(self) -> int:
        return len(self.charts)

    def validate(self) -> None:
        if not self.charts:
            raise InvalidGeometry("a geometry needs at least one vertex")
        for c in self.charts:
            if len(c) != 4:
                raise InvalidGeometry("each chart has four weights")
            if any(is_fixed(w) or w[4] for w in c):
                raise InvalidGeometry(f"chart weights must be nontrivial and mass-free: {c}")
            total = (0, 0, 0, 0, 0)
            for w in c:
                total = add_w(total, w)
            if not is_fixed(total):
                raise InvalidGeometry(f"chart {c} is not Calabi-Yau")
        used = set()
        for e in self.edges:
            if not (0 <= e.alpha < self.n_vertices and 0 <= e.beta < self.n_vertices) or e.alpha == e.beta:
                raise InvalidGeometry(f"edge {e} has bad endpoints")
            if len(e.m) != 3 or sum(e.m) != -2:
                raise InvalidGeometry(f"normal degrees {e.m} must be three integers summing to -2")
            for v, a, fr in ((e.alpha, e.axis_alpha, e.frame_alpha), (e.beta, e.axis_beta, e.frame_beta)):
                if a not in AXES or sorted(fr) != list(transverse_axes(a)):
                    raise InvalidGeometry(f"edge {e} has an inconsistent axis matching")
                if (v, a) in used:
                    raise InvalidGeometry(f"two edges leave vertex {v} along axis {a}")
                used.add((v, a))
            if transport_chart(self.charts[e.alpha], e) != list(self.charts[e.beta]):
                raise InvalidGeometry(f"edge {e} does not match the chart at vertex {e.beta}")

    def edge_images(self, k: int) -> list:
        """Global weights of the edge-frame directions 1..4, seen from alpha."""
        e = self.edges[k]
        c = self.charts[e.alpha]
        return [c[e.axis_alpha - 1]] + [c[a - 1] for a in e.frame_alpha]

    def to_json(self) -> dict:
        return {
            "kind": "custom",
            "name": self.name,
            "charts": [[list(w) for w in c] for c in self.charts],
            "edges": [e.to_json() for e in self.edges],
        }


def _identity_chart() -> list:
    return [axis_weight(a) for a in AXES]


def propagate_charts(n_vertices: int, edges: Sequence[Edge]) -> list:
    """Charts from vertex 0 = identity, transported along edges; cycles must close up."""
    charts: list = [None] * n_vertices
    charts[0] = _identity_chart()
    pending = list(edges)
    while pending:
        progress = False
        for e in list(pending):
            if not (0 <= e.alpha < n_vertices and 0 <= e.beta < n_vertices):
                raise InvalidGeometry(f"edge {e} has bad endpoints")
            if charts[e.alpha] is None:
                continue
            try:
                image = transport_chart(charts[e.alpha], e)
            except (IndexError, TypeError):
                raise InvalidGeometry(f"edge {e} has an inconsistent axis matching") from None
            if any(w is None for w in image):
                raise InvalidGeometry(f"edge {e} has an inconsistent axis matching")
            if charts[e.beta] is None:
                charts[e.beta] = image
            elif [canonicalize(w) for w in image] != [canonicalize(w) for w in charts[e.beta]]:
                raise InvalidGeometry(f"edge {e} closes a cycle inconsistently")
            pending.remove(e)
            progress = True
        if not progress:
            raise InvalidGeometry("edges must be oriented away from vertex 0 (or charts given)")
    if any(c is None for c in charts):
        raise InvalidGeometry("geometry graph is disconnected")
    return charts


def c4() -> ToricGeometry:
    return ToricGeometry("C4", (tuple(_identity_chart()),))


def local_curve(m: Sequence[int]) -> ToricGeometry:
    """Total space of O(m2) + O(m3) + O(m4) over P^1."""
    m = tuple(int(x) for x in m)
    if len(m) != 3 or sum(m) != -2:
        raise InvalidGeometry(f"normal degrees {m} must be three integers summing to -2")
    e = Edge(0, 1, 1, 1, m)
    return ToricGeometry("LocalCurve", tuple(tuple(c) for c in propagate_charts(2, [e])), (e,))


def kp3() -> ToricGeometry:
    """Canonical bundle of P^3; local axis 4 is the fibre at every vertex."""
    e = [(0, 0, 0, 0, 0)] + [axis_weight(a) for a in (1, 2, 3)]
    charts = []
    for i in range(4):
        base = [add_w(e[j], neg_w(e[i])) for j in range(4) if j != i]
        fibre = (0, 0, 0, 0, 0)
        for w in base:
            fibre = add_w(fibre, neg_w(w))
        charts.append(tuple(base + [fibre]))
    edges = []
    for i in range(4):
        for k in range(i + 1, 4):
            oa = [j for j in range(4) if j != i]
            ob = [j for j in range(4) if j != k]
            rest = [j for j in range(4) if j not in (i, k)]
            edges.append(Edge(
                i, oa.index(k) + 1, k, ob.index(i) + 1, (1, 1, -4),
                tuple(oa.index(j) + 1 for j in rest) + (4,),
                tuple(ob.index(j) + 1 for j in rest) + (4,),
            ))
    return ToricGeometry("KP3", tuple(charts), tuple(edges))


def build_geometry(spec) -> ToricGeometry:
    """From a name ("C4", "KP3"), or a dict in the geometry JSON schema."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    if not isinstance(spec, dict):
        raise InvalidGeometry(f"cannot build a geometry from {spec!r}")
    kind = spec.get("kind")
    allowed = {"C4": {"kind"}, "KP3": {"kind"}, "LocalCurve": {"kind", "m"}, "custom": {"kind", "name", "charts", "edges", "m"}}
    if kind not in allowed:
        raise InvalidGeometry(f"unknown geometry kind {kind!r}")
    unknown = set(spec) - allowed[kind]
    if unknown:
        raise InvalidGeometry(f"unknown geometry fields {sorted(unknown)}")
    if kind == "C4":
        return c4()
    if kind == "KP3":
        return kp3()
    if kind == "LocalCurve":
        if "m" not in spec:
            raise InvalidGeometry("LocalCurve needs normal degrees m")
        return local_curve(spec["m"])
    edges = tuple(Edge.from_json(d) for d in spec.get("edges", []))
    if "charts" in spec:
        try:
            charts = tuple(tuple(tuple(int(x) for x in w) for w in c) for c in spec["charts"])
        except (TypeError, ValueError):
            raise InvalidGeometry("charts must be lists of integer 5-vectors") from None
        if any(len(w) != 5 for c in charts for w in c):
            raise InvalidGeometry("chart weights are 5-vectors")
    else:
        nv = 1 + max((max(e.alpha, e.beta) for e in edges), default=0)
        charts = tuple(tuple(c) for c in propagate_charts(nv, edges))
    return ToricGeometry(spec.get("name", "custom"), charts, edges)


# fixed points


def edge_leg(g: ToricGeometry, k: int, lam: PlanePartition, at_beta: bool = False) -> PlanePartition:
    """The edge partition rewritten as the leg of the vertex partition at one end."""
    e = g.edges[k]
    axis, frame = (e.axis_beta, e.frame_beta) if at_beta else (e.axis_alpha, e.frame_alpha)
    pos = [frame.index(c) for c in transverse_axes(axis)]
    return PlanePartition(frozenset(tuple(b[p] for p in pos) for b in lam.boxes))


@dataclass(frozen=True)
class FixedPoint:
    vertices: tuple
    edges: tuple = ()

    def to_json(self) -> dict:
        return {"vertices": [p.to_json() for p in self.vertices], "edges": [l.to_json() for l in self.edges]}

    def sort_key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def vertex_legs(g: ToricGeometry, lams: Sequence[PlanePartition]) -> list:
    legs = [[PlanePartition()] * 4 for _ in range(g.n_vertices)]
    for k, (e, lam) in enumerate(zip(g.edges, lams)):
        legs[e.alpha][e.axis_alpha - 1] = edge_leg(g, k, lam)
        legs[e.beta][e.axis_beta - 1] = edge_leg(g, k, lam, at_beta=True)
    return legs


def check_fixed_point(g: ToricGeometry, fp: FixedPoint) -> None:
    """Leg of each vertex partition along an edge must be the transported edge partition."""
    if len(fp.vertices) != g.n_vertices or len(fp.edges) != len(g.edges):
        raise ValueError("fixed point does not match the geometry")
    for v, legs in enumerate(vertex_legs(g, fp.edges)):
        if tuple(fp.vertices[v].legs) != tuple(legs):
            raise ValueError(f"vertex {v} legs disagree with the edge partitions")


def _degrees(g: ToricGeometry, d) -> tuple:
    if d is None:
        d = ()
    if isinstance(d, int):
        if len(g.edges) != 1 and d:
            raise ValueError("an integer degree needs a geometry with one edge")
        d = (d,) * len(g.edges)
    d = tuple(d)
    if not any(d):
        d = (0,) * len(g.edges)
    if len(d) != len(g.edges) or any(x < 0 for x in d):
        raise ValueError(f"degrees {d} do not match the {len(g.edges)} edges")
    return d


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _edge_choices(g: ToricGeometry, d: tuple) -> Iterator[tuple]:
    return product(*[enumerate_plane(x) for x in d])


def _base_chi(g: ToricGeometry, lams, legs) -> int:
    base = sum(f_m(l, e.m) for l, e in zip(lams, g.edges))
    return base + sum(renormalized_volume(CurvePartition(tuple(L))) for L in legs)


def enumerate_fixed_points(g: ToricGeometry, n: int, d=None) -> list[FixedPoint]:
    d = _degrees(g, d)
    out = []
    for lams in _edge_choices(g, d):
        legs = vertex_legs(g, lams)
        K = n - _base_chi(g, lams, legs)
        if K < 0:
            continue
        for ks in _compositions(K, g.n_vertices):
            per_vertex = [sorted(iter_curve(L, k), key=lambda p: json.dumps(p.to_json()))
                          for L, k in zip(legs, ks)]
            for pis in product(*per_vertex):
                out.append(FixedPoint(tuple(pis), tuple(lams)))
    out.sort(key=FixedPoint.sort_key)
    return out


def min_chi(g: ToricGeometry, d=None) -> int:
    d = _degrees(g, d)
    return min(_base_chi(g, lams, vertex_legs(g, lams)) for lams in _edge_choices(g, d))


def chi(g: ToricGeometry, fp: FixedPoint) -> int:
    """chi(O_Z) = sum of renormalized vertex volumes + sum of f_m over edges."""
    return sum(renormalized_volume(p) for p in fp.vertices) + sum(f_m(l, e.m) for l, e in zip(fp.edges, g.edges))


def chi_direct(g: ToricGeometry, fp: FixedPoint, N: int) -> int:
    """Cech count of torus-weight spaces of O_Z with every chart cut off at N."""
    total = sum(len(p.truncated(N)) for p in fp.vertices)
    for lam, e in zip(fp.edges, g.edges):
        for c in lam.boxes:
            mc = sum(a * b for a, b in zip(e.m, c))
            # overlap monomials x^n y^c with n <= N (alpha side) and -n - m.c <= N (beta side)
            total -= len(range(-N - mc, N + 1))
    return total


def default_direct_cutoff(g: ToricGeometry, fp: FixedPoint) -> int:
    N = max(p.default_cutoff() for p in fp.vertices)
    span = max((max(abs(x) for x in e.m) for e in g.edges), default=0)
    ext = max((l.max_coordinate() for l in fp.edges), default=0)
    return N + 3 * span * (ext + 1)


# insertions and DT sums


@dataclass(frozen=True)
class Insertion:
    kind: str = "unit"
    mode: str = COHOMOLOGICAL
    order: int = 0
    mu: tuple = MASS

    def __post_init__(self):
        if self.kind not in ("unit", "mass"):
            raise ValueError(f"unknown insertion kind {self.kind!r}")
        if self.mode not in (COHOMOLOGICAL, K_THEORETIC, ELLIPTIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.order < 0:
            raise ValueError("truncation order must be nonnegative")
        if len(self.mu) != 5 or self.mu[4] != 1:
            raise ValueError("mass weight must have mass exponent 1")

    def validate_for(self, g: ToricGeometry) -> None:
        if self.kind == "mass" and (g.n_vertices != 1 or g.edges):
            raise InvalidGeometry("the mass-tautological insertion is only defined on C4")

    def character(self, g: ToricGeometry, fp: FixedPoint) -> CharClass:
        if self.kind == "unit":
            return CharClass.zero()
        Z = char_of(SolidPartition(fp.vertices[0].extra)).substitute(g.charts[0])
        return Z.shift(canonicalize(self.mu))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "mode": self.mode}
        if self.mode == ELLIPTIC:
            out["order"] = self.order
        if self.kind == "mass":
            out["mu"] = list(self.mu)
        return out


def _axes(choice, count: int, default: int, allowed=AXES) -> tuple:
    if choice is None:
        return (default,) * count
    if isinstance(choice, int):
        return (choice,) * count
    choice = tuple(choice)
    if len(choice) != count:
        raise ValueError(f"need {count} axis choices, got {len(choice)}")
    if any(c not in allowed for c in choice):
        raise ValueError(f"axis choices must lie in {tuple(allowed)}, got {choice}")
    return choice


def vertex_sqrt(pi: CurvePartition, i: int, N: int | None = None) -> CharClass:
    if pi.is_point_like():
        return sqrt_vertex_point(pi, i)
    return sqrt_vertex_curve_prime(VertexContext.of(pi, N), i)


def assemble_tvir(g: ToricGeometry, fp: FixedPoint) -> CharClass:
    out = CharClass.zero()
    for pi, chart in zip(fp.vertices, g.charts):
        out = out + vertex_full(VertexContext.of(pi)).substitute(chart)
    for k, (lam, e) in enumerate(zip(fp.edges, g.edges)):
        out = out + edge_full(lam, e.m).substitute(g.edge_images(k))
    return out


def half_tvir(g: ToricGeometry, fp: FixedPoint, vertex_axes=None, edge_axes=None, cutoff_shift: int = 0):
    """(signed square root of T^vir in global weights, total sign exponent)."""
    va = _axes(vertex_axes, g.n_vertices, 4)
    ea = _axes(edge_axes, len(g.edges), 4, (2, 3, 4))
    v = CharClass.zero()
    s = 0
    for pi, chart, i in zip(fp.vertices, g.charts, va):
        N = pi.default_cutoff() + cutoff_shift
        v = v + vertex_sqrt(pi, i, N).substitute(chart)
        s += sigma_curve(pi, i, N)
    for k, (lam, e, j) in enumerate(zip(fp.edges, g.edges, ea)):
        v = v + sqrt_edge(lam, e.m, j).substitute(g.edge_images(k))
        s += sigma_edge(lam, e.m, j)
    return v, s


def point_term(g: ToricGeometry, fp: FixedPoint, ins: Insertion, vertex_axes=None, edge_axes=None,
               cutoff_shift: int = 0):
    v, s = half_tvir(g, fp, vertex_axes, edge_axes, cutoff_shift)
    V = -v + ins.character(g, fp)
    sign = -1 if s % 2 else 1
    if ins.mode == ELLIPTIC:
        return theta(V, ins.order).signed(sign)
    return characteristic_class(V, ins.mode).signed(sign)


def _term_job(args):
    return point_term(*args)


@dataclass
class DTResult:
    n: int
    d: tuple
    insertion: Insertion
    terms: int
    value: RationalFunction | None = None
    p_exponent: Fraction | None = None
    series: list = field(default_factory=list)
    per_point: list | None = None

    def to_json(self) -> dict:
        out = {"n": self.n, "d": list(self.d), "insertion": self.insertion.to_json(), "terms": self.terms}
        if self.insertion.mode == ELLIPTIC:
            out["p_exponent"] = [self.p_exponent.numerator, self.p_exponent.denominator]
            series = [c.cancelled() for c in self.series]
            out["series"] = [c.to_json() for c in series]
            out["series_text"] = [c.text() for c in series]
        else:
            value = self.value.cancelled()
            out["value"] = value.to_json()
            out["text"] = value.text()
        if self.per_point is not None:
            out["per_point"] = self.per_point
        return out


def _sum_theta(terms: list, P: int, names) -> tuple:
    if not terms:
        return Fraction(0), [RationalFunction.zero(names) for _ in range(P + 1)]
    exps = {t.p_exponent for t in terms}
    if len(exps) != 1:
        raise ValueError(f"fixed points carry different leading p-powers {sorted(exps)}")
    series = []
    for k in range(P + 1):
        acc = RationalFunction.zero(names)
        for t in terms:
            acc = acc + t.coefficient(k)
        series.append(acc)
    return exps.pop(), series


def dt_invariant(g: ToricGeometry, n: int, d=None, ins: Insertion | None = None, vertex_axes=None, edge_axes=None,
                 workers: int = 1, log: bool = False, cutoff_shift: int = 0) -> DTResult:
    ins = ins or Insertion()
    ins.validate_for(g)
    d = _degrees(g, d)
    vertex_axes = _axes(vertex_axes, g.n_vertices, 4)
    edge_axes = _axes(edge_axes, len(g.edges), 4, (2, 3, 4))
    fps = enumerate_fixed_points(g, n, d)
    jobs = [(g, fp, ins, vertex_axes, edge_axes, cutoff_shift) for fp in fps]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            terms = list(ex.map(_term_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        terms = [_term_job(j) for j in jobs]
    res = DTResult(n, d, ins, len(terms))
    mode = K_THEORETIC if ins.mode == ELLIPTIC else ins.mode
    if ins.mode == ELLIPTIC:
        res.p_exponent, res.series = _sum_theta(terms, ins.order, vars_for(mode))
    else:
        res.value = sum_classes(terms, mode)
    if log:
        res.per_point = [
            {"fixed_point": fp.to_json(), "class": (t.bracket if isinstance(t, ThetaClass) else t).to_json()}
            for fp, t in zip(fps, terms)
        ]
    return res


def dt_series(g: ToricGeometry, ins: Insertion | None, n_max: int, d=None, workers: int = 1) -> list[DTResult]:
    d = _degrees(g, d)
    n_min = min_chi(g, d)
    if not any(d):
        n_min = max(n_min, 1)
    return [dt_invariant(g, n, d, ins, workers=workers) for n in range(n_min, n_max + 1)]


# global sign patching on the canonical bundle of P^3


def on_zero_section(g: ToricGeometry, fp: FixedPoint) -> bool:
    """All vertex partitions inside {x4 = 0}, x4 being the fibre coordinate."""
    for p in fp.vertices:
        if p.legs[3] or any(b[3] for b in p.extra):
            return False
        for a in (1, 2, 3):
            if any(b[2] for b in p.legs[a - 1].boxes):
                return False
    return True


def sign_patching_check(g: ToricGeometry, n: int, d) -> dict:
    if g.name != "KP3":
        raise InvalidGeometry("sign patching is checked on KP3 only")
    d = _degrees(g, d)
    c1 = 4 * sum(d)
    expected = -1 if (n + c1) % 2 else 1
    checked, failures = 0, []
    for fp in enumerate_fixed_points(g, n, d):
        if not on_zero_section(g, fp):
            continue
        s = sum(sigma_curve(p, 4) for p in fp.vertices)
        for lam, e in zip(fp.edges, g.edges):
            s += sigma_edge(lam, e.m, e.frame_alpha.index(4) + 2)
        got = -1 if s % 2 else 1
        checked += 1
        if got != expected:
            failures.append({"fixed_point": fp.to_json(), "sign": got, "expected": expected})
    return {"n": n, "d": list(d), "expected": expected, "checked": checked, "failures": failures}


__all__ = [
    "ELLIPTIC",
    "InvalidGeometry",
    "Edge",
    "ToricGeometry",
    "FixedPoint",
    "Insertion",
    "DTResult",
    "build_geometry",
    "c4",
    "local_curve",
    "kp3",
    "enumerate_fixed_points",
    "min_chi",
    "default_direct_cutoff",
    "chi",
    "check_fixed_point",
    "chi",
    "chi_direct",
    "assemble_tvir",
    "half_tvir",
    "point_term",
    "dt_invariant",
    "dt_series",
    "sign_patching_check",
]
