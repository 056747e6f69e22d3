"""Largest families avoiding a pair condition, as maximum independent sets
of the violation graph on P[n]."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass

import numpy as np

from .families import SetFamily, _ordered_hit, _popcount, verify
from .lattice import SubsetWord, layer_masks
from .restrictions import GxSystem, OrderedTilted, PairCondition, TiltedRatio, condition_system

DEFAULT_MAX_N = 14
HARD_MAX_N = 20
_BLOCK = 1024


class CapExceeded(ValueError):
    pass


@dataclass
class ViolationGraph:
    n: int
    vertices: list[int]  # subset bit patterns in (layer, colex) order
    adj: list[int]  # adjacency rows as bitmasks over vertex positions

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[SubsetWord, SubsetWord]]:
        out = []
        for u, row in enumerate(self.adj):
            row >>= u + 1
            v = u + 1
            while row:
                if row & 1:
                    out.append((SubsetWord(self.n, self.vertices[u]), SubsetWord(self.n, self.vertices[v])))
                row >>= 1
                v += 1
        return out


@dataclass
class ExtremalResult:
    size: int
    certificate: SetFamily
    optimal: bool
    nodes_explored: int
    elapsed_ms: int

    def to_json(self) -> dict:
        return {"size": self.size, "optimal": self.optimal, "nodes": self.nodes_explored,
                "elapsed_ms": self.elapsed_ms}


def _check_n(n: int, max_n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > min(max_n, HARD_MAX_N):
        raise CapExceeded(f"n={n} exceeds the violation-graph cap n <= {min(max_n, HARD_MAX_N)}")


def _violation_block(cond: PairCondition, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairs violating the condition in either orientation."""
    if isinstance(cond, OrderedTilted):
        return _ordered_hit(a, b) | _ordered_hit(b, a)
    d_ab = _popcount(a & ~b).astype(np.int64)
    d_ba = _popcount(b & ~a).astype(np.int64)
    if isinstance(cond, TiltedRatio):
        p, q = cond.p, cond.q
        return (a != b) & ((q * d_ab == p * d_ba) | (q * d_ba == p * d_ab))
    raise TypeError(cond)


def build_violation_graph(cond: PairCondition, n: int, max_n: int = DEFAULT_MAX_N,
                          layers=None) -> ViolationGraph:
    """Materialise the violation graph; ``layers`` optionally restricts the vertex support."""
    _check_n(n, max_n)
    if cond.n != n:
        raise ValueError(f"condition is on n={cond.n}, graph requested for n={n}")
    support = range(n + 1) if layers is None else sorted(set(layers))
    vertices = [m for k in support for m in layer_masks(n, k)]
    arr = np.array(vertices, dtype=np.uint64)
    size = np.array([v.bit_count() for v in vertices], dtype=np.int64)

    system = cond.system if isinstance(cond, GxSystem) else None
    if system is not None:
        forbidden = np.full((n + 1, n + 1), -1, dtype=np.int64)
        for e in system.edges:
            forbidden[e.i, e.j] = e.x

    adj = []
    for start in range(0, len(vertices), _BLOCK):
        a = arr[start:start + _BLOCK, None]
        b = arr[None, :]
        if system is not None:
            sa = size[start:start + _BLOCK, None]
            sb = size[None, :]
            fwd = (sa < sb) & (_popcount(a & ~b).astype(np.int64) == forbidden[sa, sb])
            bwd = (sb < sa) & (_popcount(b & ~a).astype(np.int64) == forbidden[sb, sa])
            block = fwd | bwd
        else:
            block = _violation_block(cond, a, b)
        packed = np.packbits(block, axis=1, bitorder="little")
        for r, row in enumerate(packed):
            v = start + r
            adj.append(int.from_bytes(row.tobytes(), "little") & ~(1 << v))
    return ViolationGraph(n, vertices, adj)


class _Timeout(Exception):
    pass


class _CliqueSearch:
    """Bitset branch and bound for maximum cliques with greedy-colouring bounds."""

    def __init__(self, comp: list[int], deadline: float | None):
        self.comp = comp
        self.deadline = deadline
        self.best: list[int] = []
        self.current: list[int] = []
        self.nodes = 0

    def _colour(self, p: int) -> tuple[list[int], list[int]]:
        comp = self.comp
        order, colours = [], []
        colour = 0
        while p:
            colour += 1
            q = p
            while q:
                low = q & -q
                v = low.bit_length() - 1
                p ^= low
                q &= ~comp[v] & ~low
                order.append(v)
                colours.append(colour)
        return order, colours

    def expand(self, p: int) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        order, colours = self._colour(p)
        size = len(self.current)
        for idx in range(len(order) - 1, -1, -1):
            if size + colours[idx] <= len(self.best):
                return
            v = order[idx]
            self.current.append(v)
            np_ = p & self.comp[v]
            if np_:
                self.expand(np_)
            elif len(self.current) > len(self.best):
                self.best = list(self.current)
            self.current.pop()
            p &= ~(1 << v)


def _greedy_independent(adj: list[int], order: list[int]) -> list[int]:
    chosen, blocked = [], 0
    for v in order:
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= adj[v] | 1 << v
    return chosen


def max_family(cond: PairCondition, n: int, time_limit_ms: int | None = None,
               max_n: int = DEFAULT_MAX_N) -> ExtremalResult:
    """Exact maximum family size (``optimal=False`` if the time limit cuts the search short)."""
    t0 = time.monotonic()
    graph = build_violation_graph(cond, n, max_n=max_n)
    nv = graph.order
    degree = [row.bit_count() for row in graph.adj]
    # Relabel so that bit position follows the search order: ascending
    # violation degree (descending degree in the complement), then canonical.
    perm = sorted(range(nv), key=lambda v: (degree[v], v))
    pos = {v: i for i, v in enumerate(perm)}
    full = (1 << nv) - 1
    adj = []
    for v in perm:
        row, r = 0, graph.adj[v]
        while r:
            low = r & -r
            row |= 1 << pos[low.bit_length() - 1]
            r ^= low
        adj.append(row)
    comp = [full ^ adj[i] ^ (1 << i) for i in range(nv)]

    deadline = None if time_limit_ms is None else t0 + time_limit_ms / 1000
    search = _CliqueSearch(comp, deadline)
    search.best = _greedy_independent(adj, list(range(nv)))
    system = condition_system(cond)
    if system is not None:
        from .weight import weight

        _, layers = weight(system)
        layer_set = set(layers)
        seeded = [i for i, v in enumerate(perm) if graph.vertices[v].bit_count() in layer_set]
        if len(seeded) > len(search.best):
            search.best = seeded

    optimal = True
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, nv + 1000))
    try:
        search.expand(full)
    except _Timeout:
        optimal = False
    finally:
        sys.setrecursionlimit(limit)

    certificate = SetFamily.from_masks(n, (graph.vertices[perm[i]] for i in search.best))
    elapsed = int((time.monotonic() - t0) * 1000)
    return ExtremalResult(len(certificate), certificate, optimal, search.nodes, elapsed)


def exhaustive_oracle(cond: PairCondition, n: int) -> int:
    """Maximum family size by scanning every family in P[n]; ``n <= 4`` only.

    Conflicts are taken from the verifiers on two-member families, so the
    answer does not depend on :func:`build_violation_graph`.
    """
    if n > 4:
        raise ValueError("exhaustive oracle supports n <= 4 only")
    vertices = list(range(1 << n))
    nv = len(vertices)
    bad = [0] * nv
    for u in range(nv):
        for v in range(u + 1, nv):
            pair = SetFamily.from_masks(n, (u, v))
            if not verify(cond, pair):
                bad[u] |= 1 << v
                bad[v] |= 1 << u
    valid = bytearray(1 << nv)
    valid[0] = 1
    best = 0
    for fam in range(1, 1 << nv):
        top = fam.bit_length() - 1
        rest = fam ^ (1 << top)
        if valid[rest] and not bad[top] & rest:
            valid[fam] = 1
            c = fam.bit_count()
            if c > best:
                best = c
    return best
