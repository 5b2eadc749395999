"""Independent partition counters used as oracles by the tests.

``count_by_subsets`` scans every n-subset of the simplex of boxes with
coordinate sum < n (which contains every downward-closed set of size n);
``count_by_closure`` grows sets box by box with a seen-set.  Neither shares
code with the package enumerators.
"""
from itertools import combinations, product


def _closed(S) -> bool:
    for b in S:
        for i, x in enumerate(b):
            if x and b[:i] + (x - 1,) + b[i + 1:] not in S:
                return False
    return True


def count_by_subsets(dim: int, n: int) -> int:
    boxes = [b for b in product(range(n), repeat=dim) if sum(b) < n]
    return sum(1 for sub in combinations(boxes, n) if _closed(set(sub)))


def count_by_closure(dim: int, n: int) -> int:
    level = {frozenset()}
    for _ in range(n):
        nxt = set()
        for S in level:
            cands = {(0,) * dim}
            for b in S:
                for i in range(dim):
                    cands.add(b[:i] + (b[i] + 1,) + b[i + 1:])
            for c in cands - S:
                T = S | {c}
                if _closed(T):
                    nxt.add(T)
        level = nxt
    return len(level)


def addable_boxes_near_cylinders(member, N: int):
    """Boxes in [0, N]^4 outside the set whose predecessors all lie inside."""
    out = []
    for b in product(range(N + 1), repeat=4):
        if member(b):
            continue
        if all(member(b[:i] + (x - 1,) + b[i + 1:]) for i, x in enumerate(b) if x):
            out.append(b)
    return out
