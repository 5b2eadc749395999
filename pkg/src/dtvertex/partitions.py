"""Plane, solid and leg-decorated (curve-like) solid partitions.

Enumeration uses reverse search: a partition's canonical parent is obtained
by deleting its lexicographically largest removable box, so every partition
is produced exactly once and the iterators stream without a seen-set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .characters import CharClass

AXES = (1, 2, 3, 4)


def transverse_axes(a: int) -> tuple[int, ...]:
    """Axes other than ``a``, increasing; the coordinate order of a leg along ``a``."""
    return tuple(b for b in AXES if b != a)


def is_downward_closed(boxes: Iterable[Sequence[int]]) -> bool:
    S = set(map(tuple, boxes))
    for b in S:
        if any(x < 0 for x in b):
            return False
        for i, x in enumerate(b):
            if x and (b[:i] + (x - 1,) + b[i + 1:]) not in S:
                return False
    return True


@dataclass(frozen=True)
class PlanePartition:
    boxes: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "boxes", frozenset(tuple(b) for b in self.boxes))

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(sorted(self.boxes))

    def __contains__(self, b) -> bool:
        return tuple(b) in self.boxes

    def to_json(self) -> list:
        return [list(b) for b in sorted(self.boxes)]

    @classmethod
    def from_json(cls, data) -> PlanePartition:
        p = cls(frozenset(tuple(b) for b in data))
        if not is_downward_closed(p.boxes) or any(len(b) != 3 for b in p.boxes):
            raise ValueError(f"not a plane partition: {data}")
        return p

    def max_coordinate(self) -> int:
        return max((max(b) for b in self.boxes), default=-1)

    def permuted(self, perm: Sequence[int]) -> PlanePartition:
        """New partition with coordinate perm[k] of each box moved to slot k."""
        return PlanePartition(frozenset(tuple(b[p] for p in perm) for b in self.boxes))


EMPTY_PLANE = PlanePartition()


@dataclass(frozen=True)
class SolidPartition:
    boxes: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "boxes", frozenset(tuple(b) for b in self.boxes))

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(sorted(self.boxes))

    def to_json(self) -> list:
        return [list(b) for b in sorted(self.boxes)]

    @classmethod
    def from_json(cls, data) -> SolidPartition:
        p = cls(frozenset(tuple(b) for b in data))
        if not is_downward_closed(p.boxes) or any(len(b) != 4 for b in p.boxes):
            raise ValueError(f"not a solid partition: {data}")
        return p

    def permuted(self, g: Sequence[int]) -> SolidPartition:
        """Relabel axes: coordinate on axis a moves to axis g[a-1]."""
        out = set()
        for b in self.boxes:
            nb = [0, 0, 0, 0]
            for a in range(4):
                nb[g[a] - 1] = b[a]
            out.add(tuple(nb))
        return SolidPartition(frozenset(out))

    def as_curve(self) -> CurvePartition:
        return CurvePartition(extra=self.boxes)


@dataclass(frozen=True)
class CurvePartition:
    """Union of the four leg cylinders plus finitely many extra boxes."""

    legs: tuple = (EMPTY_PLANE,) * 4
    extra: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        legs = tuple(l if isinstance(l, PlanePartition) else PlanePartition(l) for l in self.legs)
        if len(legs) != 4:
            raise ValueError("a curve partition has exactly four legs")
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "extra", frozenset(tuple(b) for b in self.extra))
        for b in self.extra:
            if self.in_cylinders(b):
                raise ValueError(f"extra box {b} lies in a leg cylinder")

    def in_leg(self, a: int, b: Sequence[int]) -> bool:
        lam = self.legs[a - 1]
        if not lam.boxes:
            return False
        return tuple(b[c - 1] for c in transverse_axes(a)) in lam.boxes

    def in_cylinders(self, b: Sequence[int]) -> bool:
        return any(self.in_leg(a, b) for a in AXES)

    def __contains__(self, b) -> bool:
        b = tuple(b)
        return b in self.extra or self.in_cylinders(b)

    def is_point_like(self) -> bool:
        return not any(self.legs)

    def nonempty_legs(self) -> tuple[int, ...]:
        return tuple(a for a in AXES if self.legs[a - 1])

    def leg_extent(self) -> int:
        """Largest coordinate occurring in any leg plane partition (-1 if none)."""
        return max((l.max_coordinate() for l in self.legs), default=-1)

    def default_cutoff(self) -> int:
        m = self.leg_extent()
        for b in self.extra:
            m = max(m, max(b))
        return m + 2

    def leg_boxes(self, a: int, N: int) -> set:
        """Boxes of the leg-``a`` cylinder inside [0, N]^4."""
        out = set()
        T = transverse_axes(a)
        for box in self.legs[a - 1].boxes:
            for n in range(N + 1):
                b = [0, 0, 0, 0]
                b[a - 1] = n
                for c, x in zip(T, box):
                    b[c - 1] = x
                out.add(tuple(b))
        return out

    def truncated(self, N: int) -> set:
        """The cut-off (pi intersected with [0, N]^4) as a finite box set."""
        out = set(b for b in self.extra if max(b) <= N)
        for a in AXES:
            out |= self.leg_boxes(a, N)
        return out

    def to_json(self) -> dict:
        return {"legs": [l.to_json() for l in self.legs], "extra": [list(b) for b in sorted(self.extra)]}

    @classmethod
    def from_json(cls, data) -> CurvePartition:
        legs = tuple(PlanePartition.from_json(l) for l in data["legs"])
        pi = cls(legs, frozenset(tuple(b) for b in data.get("extra", [])))
        N = pi.default_cutoff()
        if not is_downward_closed(pi.truncated(N)):
            raise ValueError("curve partition is not downward closed")
        return pi


# enumeration


def _removable(b, member) -> bool:
    for i in range(len(b)):
        nb = b[:i] + (b[i] + 1,) + b[i + 1:]
        if member(nb):
            return False
    return True


def _addable(b, member) -> bool:
    if member(b):
        return False
    for i, x in enumerate(b):
        if x and not member(b[:i] + (x - 1,) + b[i + 1:]):
            return False
    return True


def _reverse_search(dim: int, size: int, base_member, seeds: Iterable[tuple]) -> Iterator[frozenset]:
    """All finite sets S of ``size`` boxes with base + S downward closed."""
    seeds = frozenset(seeds)

    def children(S: frozenset):
        def member(b):
            return b in S or base_member(b)

        cands = set()
        for x in S | seeds:
            for i in range(dim):
                cands.add(x[:i] + (x[i] + 1,) + x[i + 1:])
        cands |= seeds
        for b in sorted(cands):
            if not _addable(b, member):
                continue
            child = S | {b}

            def cmember(c, child=child):
                return c in child or base_member(c)

            top = max(x for x in child if _removable(x, cmember))
            if top == b:
                yield child

    def walk(S, depth):
        if depth == size:
            yield S
            return
        for c in children(S):
            yield from walk(c, depth + 1)

    yield from walk(frozenset(), 0)


def _base_seeds(pi: CurvePartition) -> set:
    """Origin plus cylinder boxes near the corner; every addable box neighbours one of them or an extra box."""
    L = pi.leg_extent() + 1
    seeds = {(0, 0, 0, 0)}
    for a in AXES:
        for b in pi.leg_boxes(a, max(L, 0)):
            seeds.add(b)
    return seeds


def iter_curve(legs: Sequence[PlanePartition], k: int) -> Iterator[CurvePartition]:
    base = CurvePartition(tuple(legs))
    seeds = _base_seeds(base)
    for S in _reverse_search(4, k, base.in_cylinders, seeds):
        yield CurvePartition(base.legs, S)


def enumerate_curve(legs: Sequence[PlanePartition], kmax: int) -> list[CurvePartition]:
    out = []
    for k in range(kmax + 1):
        out.extend(sorted(iter_curve(legs, k), key=curve_sort_key))
    return out


def iter_solid(n: int) -> Iterator[SolidPartition]:
    for S in _reverse_search(4, n, lambda b: False, {(0, 0, 0, 0)}):
        yield SolidPartition(S)


def iter_plane(n: int) -> Iterator[PlanePartition]:
    for S in _reverse_search(3, n, lambda b: False, {(0, 0, 0)}):
        yield PlanePartition(S)


def enumerate_solid(n: int) -> list[SolidPartition]:
    if n < 0:
        raise ValueError("size must be nonnegative")
    return sorted(iter_solid(n), key=lambda p: sorted(p.boxes))


def enumerate_plane(n: int) -> list[PlanePartition]:
    if n < 0:
        raise ValueError("size must be nonnegative")
    return sorted(iter_plane(n), key=lambda p: sorted(p.boxes))


def curve_sort_key(pi: CurvePartition):
    return ([sorted(l.boxes) for l in pi.legs], len(pi.extra), sorted(pi.extra))


# statistics


def renormalized_volume(pi: CurvePartition, N: int | None = None, check: bool = True) -> int:
    """#(pi in [0,N]^4) - (N+1) * sum of leg sizes."""
    if N is None:
        N = pi.default_cutoff()
    legsize = sum(len(l) for l in pi.legs)

    def at(n):
        return len(pi.truncated(n)) - (n + 1) * legsize

    v = at(N)
    if check and at(N + 1) != v:
        raise AssertionError(f"renormalized volume unstable at cut-off {N}")
    return v


def f_m(lam: PlanePartition, m: Sequence[int]) -> int:
    m2, m3, m4 = m
    return sum(1 - m2 * i - m3 * j - m4 * k for i, j, k in lam.boxes)


def _diag_dominated(b: Sequence[int], i: int) -> bool:
    others = [b[c - 1] for c in AXES if c != i]
    return others[0] == others[1] == others[2] < b[i - 1]


def sigma_point(pi: SolidPartition, i: int) -> int:
    return len(pi) + sum(1 for b in pi.boxes if _diag_dominated(b, i))


def sigma_curve(pi: CurvePartition, i: int, N: int | None = None, check: bool = True) -> int:
    """Sign exponent for a curve-like partition, with each infinite count cut off at N."""
    if N is None:
        N = pi.default_cutoff()

    def at(n):
        count = sum(1 for b in pi.truncated(n) if _diag_dominated(b, i))
        for a in AXES:
            count -= sum(1 for b in pi.leg_boxes(a, n) if _diag_dominated(b, i))
        return count

    s = renormalized_volume(pi, N, check) + at(N)
    if check and at(N + 1) != at(N):
        raise AssertionError(f"diagonal count unstable at cut-off {N}")
    return s


def sigma_edge(lam: PlanePartition, m: Sequence[int], i: int) -> int:
    """Edge sign exponent, i in {2, 3, 4} indexing the transverse axes of an x1-leg."""
    if i not in (2, 3, 4):
        raise ValueError("edge axis must be 2, 3 or 4")
    j, k = [c for c in (2, 3, 4) if c != i]
    diag = sum(1 for b in lam.boxes if b[j - 2] == b[k - 2] < b[i - 2])
    return f_m(lam, m) + len(lam) * m[i - 2] + diag


def char_of(p, axis: int | None = None) -> CharClass:
    """Character of a finite partition.

    A solid partition gives sum t^box.  A plane partition sitting on the leg
    along ``axis`` uses the remaining three variables in increasing order.
    """
    if isinstance(p, SolidPartition):
        return CharClass.from_boxes(p.boxes)
    if isinstance(p, PlanePartition):
        if axis is None:
            raise ValueError("a leg axis is required for a plane partition")
        return CharClass.from_boxes(p.boxes, transverse_axes(axis))
    raise TypeError(f"cannot take the character of {type(p).__name__}")


def bounded_box(dim: int, n: int):
    return product(range(n), repeat=dim)
