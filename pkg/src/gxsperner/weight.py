"""Exact weight ``w(G)`` of a layer graph: the heaviest independent set of layers,
each layer ``i`` weighing ``binom(n, i)``."""

from __future__ import annotations

from .lattice import binomial
from .restrictions import RestrictionSystem


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _MWIS:
    """Branch and bound over the layer graph, heaviest vertex first."""

    def __init__(self, weights: list[int], adj: list[int]):
        self.weights = weights
        self.adj = adj
        self.order = sorted(range(len(weights)), key=lambda v: (-weights[v], v))

    def mass(self, mask: int) -> int:
        return sum(self.weights[v] for v in _bits(mask))

    def best(self, cands: int, base: int, target: int) -> int:
        """Largest ``base + mass(I)`` over independent ``I`` inside ``cands``.

        Branches whose bound cannot reach ``target`` are pruned; the search
        stops as soon as ``target`` itself is attained.  Returns ``-1`` when
        nothing reaches ``target``.
        """
        w, adj, order = self.weights, self.adj, self.order
        best = -1
        stack = [(cands, base, self.mass(cands), 0)]
        while stack:
            cands, cur, rem, pos = stack.pop()
            floor_ = max(best + 1, target)
            if cur + rem < floor_:
                continue
            if not cands:
                best = cur
                if best >= target and target > 0:
                    return best
                continue
            while not cands >> order[pos] & 1:
                pos += 1
            v = order[pos]
            bit = 1 << v
            stack.append((cands ^ bit, cur, rem - w[v], pos + 1))
            removed = cands & (adj[v] | bit)
            stack.append((cands & ~removed, cur + w[v], rem - self.mass(removed), pos + 1))
        return best


def weight(system: RestrictionSystem) -> tuple[int, list[int]]:
    """Return ``(w, I)`` with ``I`` the lexicographically smallest optimal layer set."""
    system.check()
    n = system.n
    weights = [binomial(n, i) for i in range(n + 1)]
    adj = system.adjacency()
    solver = _MWIS(weights, adj)
    everything = (1 << (n + 1)) - 1
    w = solver.best(everything, 0, 0)

    # Walk layers upward, keeping each one whenever an optimum still extends it.
    chosen: list[int] = []
    cands = everything
    mass = 0
    for v in range(n + 1):
        if not cands >> v & 1:
            continue
        bit = 1 << v
        later = cands & ~((bit << 1) - 1)
        with_v = later & ~adj[v]
        if solver.best(with_v, mass + weights[v], w) == w:
            chosen.append(v)
            mass += weights[v]
            cands = with_v | bit
        else:
            cands ^= bit
    assert mass == w
    return w, chosen


