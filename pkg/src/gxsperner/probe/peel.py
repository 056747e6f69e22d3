"""Minimum-neighbour-degree extraction and greedy neighbour walks inside a
middle layer ``T^{(t/2)}``; two sets are neighbours when they differ by a swap."""

from __future__ import annotations

from collections import deque
from typing import Sequence

from ..lattice import SubsetWord


def _check_middle_layer(family: Sequence[SubsetWord]) -> int:
    if not family:
        return 0
    t = family[0].n
    if t % 2:
        raise ValueError(f"ground size t={t} must be even")
    for s in family:
        if s.n != t or len(s) != t // 2:
            raise ValueError(f"mixed sizes: {{{s}}} is not a {t // 2}-subset of [{t}]")
    return t


def _swaps(bits: int, t: int):
    """All sets obtained from ``bits`` by one swap, as bit patterns."""
    inside = [e for e in range(t) if bits >> e & 1]
    outside = [e for e in range(t) if not bits >> e & 1]
    for i in inside:
        for o in outside:
            yield bits ^ (1 << i) ^ (1 << o)


def neighbour_counts(family: Sequence[SubsetWord]) -> dict[int, int]:
    t = _check_middle_layer(family)
    members = {s.bits for s in family}
    return {b: sum(c in members for c in _swaps(b, t)) for b in members}


def peel(family: Sequence[SubsetWord], threshold: int) -> list[SubsetWord]:
    """Largest subfamily in which every member has at least ``threshold`` neighbours.

    Members below the threshold are removed until none remain; the survivors
    (returned in colex order) form the unique maximal such subfamily.
    """
    t = _check_middle_layer(family)
    if not family:
        return []
    n = family[0].n
    alive = {s.bits for s in family}
    if len(alive) != len(family):
        raise ValueError("family has repeated members")
    nbrs = {b: [c for c in _swaps(b, t) if c in alive] for b in alive}
    degree = {b: len(v) for b, v in nbrs.items()}
    queue = deque(b for b in sorted(alive) if degree[b] < threshold)
    while queue:
        b = queue.popleft()
        if b not in alive:
            continue
        alive.discard(b)
        for c in nbrs[b]:
            if c in alive:
                degree[c] -= 1
                if degree[c] == threshold - 1:
                    queue.append(c)
    return [SubsetWord(n, b) for b in sorted(alive)]


def neighbor_walk(family: Sequence[SubsetWord], start: SubsetWord, steps: int) -> list[SubsetWord] | None:
    """Walk ``start = D_0, D_1, ..., D_steps`` through ``family``.

    Each step swaps an element of ``D_0`` out for an element outside ``D_0``,
    so ``|D_{l+1} \\ D_0| = |D_l \\ D_0| + 1``.  The colex-first admissible
    neighbour is taken; ``None`` means the walk got stuck.
    """
    t = _check_middle_layer(list(family) + [start])
    if not 0 <= steps <= t // 2:
        raise ValueError(f"steps must lie in [0, {t // 2}]")
    members = {s.bits for s in family}
    if start.bits not in members:
        raise ValueError("start set is not in the family")
    d0 = start.bits
    path = [start]
    cur = d0
    for _ in range(steps):
        options = [
            c for c in _swaps(cur, t)
            if c in members and (c & ~cur & ~d0) and not (cur & ~c & ~d0)
        ]
        if not options:
            return None
        cur = min(options)
        path.append(SubsetWord(start.n, cur))
    return path
