"""Pairwise layer restrictions ``(G, x)`` and the named conditions built from them.

An edge ``(i, j, x)`` with ``i < j`` forbids ``|A \\ B| = x`` for ``A`` in layer
``i`` and ``B`` in layer ``j``.  Same-layer pairs cannot carry a restriction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union


class InvalidSystem(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Edge:
    i: int
    j: int
    x: int


@dataclass(frozen=True)
class RestrictionSystem:
    n: int
    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_triples(cls, n: int, triples) -> "RestrictionSystem":
        return cls(n, tuple(Edge(*t) for t in triples))

    def canonical(self) -> "RestrictionSystem":
        return RestrictionSystem(self.n, tuple(sorted(self.edges)))

    def adjacency(self) -> list[int]:
        """Layer-graph neighbourhoods as bitmasks over vertices ``0..n``."""
        adj = [0] * (self.n + 1)
        for e in self.edges:
            adj[e.i] |= 1 << e.j
            adj[e.j] |= 1 << e.i
        return adj

    def is_independent(self, layers) -> bool:
        chosen = set(layers)
        return not any(e.i in chosen and e.j in chosen for e in self.edges)

    def check(self) -> "RestrictionSystem":
        report = validate_system(self)
        if report is not None:
            raise InvalidSystem(report)
        return self


def validate_system(system: RestrictionSystem) -> str | None:
    """Return ``None`` when the system is valid, else a message naming the first bad edge."""
    n = system.n
    if not isinstance(n, int) or n < 1:
        return f"ground-set size must be a positive integer, got {n!r}"
    seen = set()
    for e in system.edges:
        if not (0 <= e.i < e.j <= n):
            return f"edge ({e.i},{e.j},{e.x}): need 0 <= i < j <= n={n}"
        if (e.i, e.j) in seen:
            return f"edge ({e.i},{e.j},{e.x}): duplicate layer pair"
        seen.add((e.i, e.j))
        bound = min(e.i, n - e.j)
        if not 0 <= e.x <= bound:
            return f"edge ({e.i},{e.j},{e.x}): x outside [0, min(i, n-j)] = [0, {bound}]"
    return None


def sperner_system(n: int) -> RestrictionSystem:
    if n < 1:
        raise ValueError("n must be at least 1")
    return RestrictionSystem(
        n, tuple(Edge(i, j, 0) for i in range(n + 1) for j in range(i + 1, n + 1))
    )


def _check_ratio(p: int, q: int) -> None:
    if p == q:
        raise ValueError("p = q has no (G, x) representation; need p < q")
    if not (0 <= p < q):
        raise ValueError(f"need 0 <= p < q, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p and q must be coprime, got p={p}, q={q}")


def tilted_system(n: int, p: int, q: int) -> RestrictionSystem:
    """The layer system equivalent to forbidding ``q|A \\ B| = p|B \\ A|``.

    For ``|A| = i < j = |B|`` we have ``|B \\ A| = |A \\ B| + (j - i)``, so the
    forbidden value is ``p (j - i) / (q - p)`` whenever that is an integer.
    """
    _check_ratio(p, q)
    if n < 1:
        raise ValueError("n must be at least 1")
    edges = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            num = p * (j - i)
            if num % (q - p):
                continue
            x = num // (q - p)
            if x <= min(i, n - j):
                edges.append(Edge(i, j, x))
    return RestrictionSystem(n, tuple(edges))


@dataclass(frozen=True)
class GxSystem:
    system: RestrictionSystem

    @property
    def n(self) -> int:
        return self.system.n


@dataclass(frozen=True)
class TiltedRatio:
    p: int
    q: int
    n: int

    def __post_init__(self):
        _check_ratio(self.p, self.q)


@dataclass(frozen=True)
class OrderedTilted:
    n: int


PairCondition = Union[GxSystem, TiltedRatio, OrderedTilted]


def serialize_system(system: RestrictionSystem) -> str:
    sys_ = system.canonical()
    return json.dumps(
        {"n": sys_.n, "edges": [{"i": e.i, "j": e.j, "x": e.x} for e in sys_.edges]}
    )


def parse_system(text: str) -> RestrictionSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSystem(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"n", "edges"}:
        raise InvalidSystem('expected an object with exactly the keys "n" and "edges"')
    n, raw = obj["n"], obj["edges"]
    if not isinstance(n, int) or isinstance(n, bool) or not isinstance(raw, list):
        raise InvalidSystem('"n" must be an integer and "edges" a list')
    edges = []
    for item in raw:
        if not isinstance(item, dict) or set(item) != {"i", "j", "x"}:
            raise InvalidSystem(f"malformed edge {item!r}")
        if not all(isinstance(item[k], int) and not isinstance(item[k], bool) for k in "ijx"):
            raise InvalidSystem(f"non-integer field in edge {item!r}")
        edges.append(Edge(item["i"], item["j"], item["x"]))
    return RestrictionSystem(n, tuple(edges)).check().canonical()


def parse_condition(spec: str, n: int) -> PairCondition:
    """Resolve ``sperner``, ``tilted:p:q``, ``ordered-tilted`` or a system JSON path."""
    if spec == "sperner":
        return GxSystem(sperner_system(n))
    if spec == "ordered-tilted":
        return OrderedTilted(n)
    if spec.startswith("tilted:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected tilted:p:q, got {spec!r}")
        return TiltedRatio(int(parts[1]), int(parts[2]), n)
    with open(spec) as fh:
        system = parse_system(fh.read())
    if system.n != n:
        raise InvalidSystem(f"system file has n={system.n}, requested n={n}")
    return GxSystem(system)


def condition_system(cond: PairCondition) -> RestrictionSystem | None:
    """The layer system behind a condition, or ``None`` for the ordered pattern."""
    if isinstance(cond, GxSystem):
        return cond.system
    if isinstance(cond, TiltedRatio):
        return tilted_system(cond.n, cond.p, cond.q)
    return None
