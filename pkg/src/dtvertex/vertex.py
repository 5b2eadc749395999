"""Vertex and edge terms of the localization formula and their square roots.

Every vertex quantity for a curve-like partition is assembled from finite
pieces and pieces carrying (1 - t^w) denominators; the latter are summed by
exact division, never by series truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .characters import (
    CharClass,
    P_bar,
    RatChar,
    axis_weight,
    bar,
    edge_frame_exponents,
    sum_exact,
)
from .partitions import AXES, CurvePartition, PlanePartition, SolidPartition, char_of, transverse_axes


def complement(*axes: int) -> tuple[int, ...]:
    return tuple(a for a in AXES if a not in axes)


def _pbar_factors(axes: Sequence[int]) -> tuple:
    # (1 - t_a^{-1}) as an unexpanded numerator factor
    return tuple(axis_weight(a, -1) for a in axes)


def _times(pieces, other, factors=()):
    """Products of two piece lists, optionally times prod(1 - t^f)."""
    out = []
    for p in pieces:
        for q in other:
            r = _as_rat(p) * _as_rat(q)
            out.append(RatChar(r.numerator, r.denominator, r.factors + tuple(factors)))
    return out


def _as_rat(p) -> RatChar:
    return p if isinstance(p, RatChar) else RatChar(p)


def _bar(pieces):
    return [_as_rat(p).bar() for p in pieces]


def _neg(pieces):
    return [-_as_rat(p) for p in pieces]


def _over(pieces, *den):
    out = []
    for p in pieces:
        r = _as_rat(p)
        out.append(RatChar(r.numerator, r.denominator + tuple(den), r.factors))
    return out


def sqrt_point_char(Z: CharClass, i: int) -> CharClass:
    """Z - Pbar_{jkl} Z Zbar for a finite character Z."""
    return Z - P_bar(complement(i)) * Z * bar(Z)


@dataclass(frozen=True)
class VertexContext:
    pi: CurvePartition
    N: int

    def __post_init__(self):
        if self.N < self.pi.default_cutoff():
            raise ValueError(f"cut-off {self.N} below admissible {self.pi.default_cutoff()}")

    @classmethod
    def of(cls, pi, N: int | None = None) -> VertexContext:
        if isinstance(pi, SolidPartition):
            pi = pi.as_curve()
        return cls(pi, pi.default_cutoff() if N is None else N)

    @cached_property
    def Z_nor(self) -> CharClass:
        return CharClass.from_boxes(self.pi.truncated(self.N))

    @cached_property
    def Z_leg(self) -> dict:
        return {a: char_of(self.pi.legs[a - 1], a) for a in AXES}

    @cached_property
    def Z_cyl(self) -> dict:
        """Characters of the leg cylinders cut off at N."""
        out = {}
        for a in AXES:
            geo = CharClass.zero()
            for n in range(self.N + 1):
                geo = geo + CharClass.t(a, n)
            out[a] = self.Z_leg[a] * geo
        return out

    def tail(self, a: int) -> RatChar:
        """Z_leg(a) t_a^{N+1} / (1 - t_a): the part of leg a beyond the cut-off."""
        return RatChar(self.Z_leg[a].shift(axis_weight(a, self.N + 1)), [axis_weight(a)])

    @cached_property
    def Z_pieces(self) -> list:
        out = [self.Z_nor]
        out += [self.tail(a) for a in self.pi.nonempty_legs()]
        return out


def _ctx(x) -> VertexContext:
    return x if isinstance(x, VertexContext) else VertexContext.of(x)


def vertex_full(ctx) -> CharClass:
    """Full vertex term Z + Zbar - Pbar_1234 Z Zbar + sum_i F_i / (1 - t_i)."""
    ctx = _ctx(ctx)
    Z = ctx.Z_pieces
    pieces = list(Z) + _bar(Z)
    pieces += _neg(_times(Z, _bar(Z), _pbar_factors(AXES)))
    for i in ctx.pi.nonempty_legs():
        Zl = ctx.Z_leg[i]
        F = -Zl + bar(Zl).shift(axis_weight(i)) + P_bar(complement(i)) * Zl * bar(Zl)
        pieces.append(RatChar(F, [axis_weight(i)]))
    return sum_exact(pieces)


def f_leg_char(Zl: CharClass, i: int, j: int) -> CharClass:
    """-Z + Pbar_{kl} Z Zbar for a leg along axis j, square-root axis i."""
    return -Zl + P_bar(complement(i, j)) * Zl * bar(Zl)


def sqrt_vertex_point(pi, i: int) -> CharClass:
    if isinstance(pi, CurvePartition):
        if not pi.is_point_like():
            raise ValueError("partition has legs; use sqrt_vertex_curve")
        pi = SolidPartition(pi.extra)
    return sqrt_point_char(char_of(pi), i)


def sqrt_vertex_curve_direct(ctx, i: int) -> CharClass:
    """Square root v^i summed straight from its closed form (rational route)."""
    ctx = _ctx(ctx)
    Z = ctx.Z_pieces
    c = _pbar_factors(complement(i))
    pieces = list(Z) + _neg(_times(Z, _bar(Z), c))
    for j in ctx.pi.nonempty_legs():
        if j != i:
            pieces.append(RatChar(f_leg_char(ctx.Z_leg[j], i, j), [axis_weight(j)]))
    Zi = ctx.Z_leg[i]
    if Zi:
        ti = axis_weight(i)
        inner = [-Zi]
        inner += _times(_bar(Z), [Zi], c)
        inner += _neg(_times(Z, [bar(Zi)], c))
        inner += [RatChar(Zi * bar(Zi), [ti], c)]
        pieces += _over(inner, ti)
    return sum_exact(pieces)


def correction_A(ctx, i: int) -> CharClass:
    ctx = _ctx(ctx)
    c = _pbar_factors(complement(i))
    legs = ctx.pi.nonempty_legs()
    pieces = []
    for a in legs:
        if a == i:
            continue
        for b in legs:
            if b != a and b != i:
                pieces += _neg(_times([ctx.tail(a)], [ctx.tail(b).bar()], c))
        if i in legs:
            pieces += _neg(_times([ctx.tail(a)], [ctx.tail(i).bar()], _pbar_factors(AXES)))
    return sum_exact(pieces)


def correction_B(ctx, i: int) -> CharClass:
    ctx = _ctx(ctx)
    c = _pbar_factors(complement(i))
    pieces = []
    for a in ctx.pi.nonempty_legs():
        rest = ctx.Z_nor - ctx.Z_cyl[a]
        if a != i:
            pieces += _neg(_times([ctx.tail(a)], [bar(rest)], c))
            pieces += _neg(_times([ctx.tail(a).bar()], [rest], c))
        else:
            pieces += _neg(_times([ctx.tail(i).bar()], [rest], _pbar_factors(AXES)))
    return sum_exact(pieces)


def correction_C(ctx, i: int) -> CharClass:
    """Leg-i correction separating v' from v; zero when leg i is empty."""
    ctx = _ctx(ctx)
    Zi = ctx.Z_cyl[i]
    if not Zi:
        return CharClass.zero()
    c = _pbar_factors(complement(i))
    pieces = [RatChar(Zi * bar(ctx.Z_nor - Zi), (), c)]
    for a in ctx.pi.nonempty_legs():
        if a != i:
            pieces += _times([ctx.tail(a).bar()], [Zi], c)
    return sum_exact(pieces)


def sqrt_vertex_decomposed(ctx, i: int) -> CharClass:
    """v^i rebuilt from cut-off pieces: v(pi_nor) - sum_a v(pi_a) + A + B + C - Cbar."""
    ctx = _ctx(ctx)
    out = sqrt_point_char(ctx.Z_nor, i)
    for a in ctx.pi.nonempty_legs():
        out = out - sqrt_point_char(ctx.Z_cyl[a], i)
    C = correction_C(ctx, i)
    return out + correction_A(ctx, i) + correction_B(ctx, i) + C - bar(C)


def sqrt_vertex_curve(ctx, i: int, check: bool = False) -> CharClass:
    ctx = _ctx(ctx)
    v = sqrt_vertex_curve_direct(ctx, i)
    if check:
        w = sqrt_vertex_decomposed(ctx, i)
        if v != w:
            raise AssertionError(f"vertex decomposition mismatch for axis {i}: {v - w!r}")
    return v


def sqrt_vertex_curve_prime(ctx, i: int) -> CharClass:
    """v'^i = v^i - C^i + Cbar^i, i.e. v(pi_nor) - sum_a v(pi_a) + A + B."""
    ctx = _ctx(ctx)
    out = sqrt_point_char(ctx.Z_nor, i)
    for a in ctx.pi.nonempty_legs():
        out = out - sqrt_point_char(ctx.Z_cyl[a], i)
    return out + correction_A(ctx, i) + correction_B(ctx, i)


def bridge_parity(ctx, i: int) -> int:
    """Rank of the movable part of C^i, mod 2: the sign change between v and v'."""
    return correction_C(ctx, i).movable_part().rank() % 2


# edge terms: leg along x1, transverse variables t2, t3, t4


def edge_char(lam: PlanePartition) -> CharClass:
    return CharClass.from_boxes(lam.boxes, (2, 3, 4))


def f_leg(lam: PlanePartition, j: int) -> CharClass:
    if j not in (2, 3, 4):
        raise ValueError("edge axis must be 2, 3 or 4")
    return f_leg_char(edge_char(lam), 1, j)


def A_k(k: int) -> CharClass:
    if k <= 0:
        return -sum((CharClass.t(1, i) for i in range(-k + 1)), CharClass.zero())
    if k == 1:
        return CharClass.zero()
    return sum((CharClass.t(1, -1 - i) for i in range(k - 1)), CharClass.zero())


def B_op(V: CharClass, m: Sequence[int]) -> CharClass:
    """sum over weights t^nu of V of t^nu A(m.nu), nu read in the t1-free frame."""
    out = CharClass.zero()
    for w, k in sorted(V.items()):
        nu = edge_frame_exponents(w)
        s = m[0] * nu[0] + m[1] * nu[1] + m[2] * nu[2]
        out = out + A_k(s).shift(w) * k
    return out


def edge_F(lam: PlanePartition) -> CharClass:
    Zl = edge_char(lam)
    # Zbar / (t2 t3 t4), written with t1-free exponents
    twisted = CharClass({(0, -a - 1, -b - 1, -c - 1, 0): 1 for a, b, c in lam.boxes})
    return -Zl + twisted + P_bar((2, 3, 4)) * Zl * bar(Zl)


def edge_full(lam: PlanePartition, m: Sequence[int]) -> CharClass:
    return B_op(edge_F(lam), m)


def sqrt_edge(lam: PlanePartition, m: Sequence[int], j: int) -> CharClass:
    return B_op(f_leg(lam, j), m)


__all__ = [
    "VertexContext",
    "vertex_full",
    "sqrt_vertex_point",
    "sqrt_vertex_curve",
    "sqrt_vertex_curve_direct",
    "sqrt_vertex_decomposed",
    "sqrt_vertex_curve_prime",
    "correction_A",
    "correction_B",
    "correction_C",
    "bridge_parity",
    "f_leg",
    "A_k",
    "B_op",
    "edge_F",
    "edge_full",
    "sqrt_edge",
    "transverse_axes",
]
