"""Set families, the pairwise condition verifiers and explicit constructions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .lattice import GroundSetMismatch, SubsetWord, binomial, layer_masks
from .restrictions import (
    Edge,
    GxSystem,
    OrderedTilted,
    PairCondition,
    RestrictionSystem,
    TiltedRatio,
    _check_ratio,
)

# Families larger than this are never materialised.
MATERIALIZE_CAP = 1 << 24
# Row block used by the vectorised pair scans.
_BLOCK = 512


class FamilyFormatError(ValueError):
    pass


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SetFamily:
    n: int
    buckets: tuple[tuple[SubsetWord, ...], ...]

    def __post_init__(self):
        if len(self.buckets) != self.n + 1:
            raise ValueError("need one bucket per layer 0..n")
        for i, bucket in enumerate(self.buckets):
            prev = -1
            for s in bucket:
                if s.n != self.n:
                    raise GroundSetMismatch(f"member {s} lives on [{s.n}], family on [{self.n}]")
                if len(s) != i:
                    raise ValueError(f"member {s} filed in layer {i}")
                if s.bits <= prev:
                    raise ValueError(f"layer {i} not strictly colex-sorted (duplicate or out of order)")
                prev = s.bits

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[SubsetWord]) -> "SetFamily":
        """Bucket and sort ``sets``; duplicates are an error."""
        layers: list[list[SubsetWord]] = [[] for _ in range(n + 1)]
        seen = set()
        for s in sets:
            if s.n != n:
                raise GroundSetMismatch(f"member {s} lives on [{s.n}], family on [{n}]")
            if s.bits in seen:
                raise ValueError(f"duplicate member {{{s}}}")
            seen.add(s.bits)
            layers[len(s)].append(s)
        return cls(n, tuple(tuple(sorted(b, key=lambda s: s.bits)) for b in layers))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        return cls.from_sets(n, (SubsetWord(n, m) for m in masks))

    def members(self) -> list[SubsetWord]:
        """All members in (layer, colex) order."""
        return [s for bucket in self.buckets for s in bucket]

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets)

    def __contains__(self, s: SubsetWord) -> bool:
        if s.n != self.n:
            return False
        return s in self.buckets[len(s)]


@dataclass(frozen=True)
class Pass:
    ok = True

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Violation:
    """A violating ordered pair together with the rule it breaks.

    ``witness`` is the offending :class:`Edge`, the ``(p, q)`` ratio, or the
    string ``"ordered"`` for the ordered pattern.
    """

    a: SubsetWord
    b: SubsetWord
    witness: Union[Edge, tuple[int, int], str]
    ok = False

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Edge):
            w = {"i": w.i, "j": w.j, "x": w.x}
        elif isinstance(w, tuple):
            w = {"p": w[0], "q": w[1]}
        return {"A": str(self.a), "B": str(self.b), "witness": w}


Verdict = Union[Pass, Violation]


def _as_array(sets) -> np.ndarray:
    return np.fromiter((s.bits for s in sets), dtype=np.uint64, count=len(sets))


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x)


def _first_hit(rows: np.ndarray, cols: np.ndarray, hit) -> tuple[int, int] | None:
    """First ``(r, c)`` in row-major order with ``hit(rows[r], cols[c])`` true."""
    for start in range(0, len(rows), _BLOCK):
        block = rows[start:start + _BLOCK, None]
        mask = hit(block, cols[None, :])
        if mask.any():
            r, c = np.unravel_index(int(np.argmax(mask)), mask.shape)
            return start + int(r), int(c)
    return None


def _vectorizable(n: int) -> bool:
    return n <= 64


def verify_gx(family: SetFamily, system: RestrictionSystem) -> Verdict:
    """Check every edge ``(i, j, x)``: no ``A`` in layer ``i``, ``B`` in layer ``j`` with ``|A \\ B| = x``."""
    if family.n != system.n:
        raise GroundSetMismatch(f"ground-set mismatch: family n={family.n}, system n={system.n}")
    for e in sorted(system.edges):
        low, high = family.buckets[e.i], family.buckets[e.j]
        if not low or not high:
            continue
        if _vectorizable(family.n):
            x = e.x
            hit = _first_hit(_as_array(low), _as_array(high),
                             lambda a, b: _popcount(a & ~b) == x)
            if hit is not None:
                return Violation(low[hit[0]], high[hit[1]], e)
        else:
            for a in low:
                for b in high:
                    if (a.bits & ~b.bits).bit_count() == e.x:
                        return Violation(a, b, e)
    return Pass()


def verify_tilted(family: SetFamily, p: int, q: int) -> Verdict:
    """Check that no distinct ``A, B`` satisfy ``q|A \\ B| = p|B \\ A|``."""
    _check_ratio(p, q)
    members = family.members()
    if not members:
        return Pass()
    if _vectorizable(family.n):
        arr = _as_array(members)
        hit = _first_hit(arr, arr, lambda a, b: (a != b) & (
            q * _popcount(a & ~b).astype(np.int64) == p * _popcount(b & ~a).astype(np.int64)))
        if hit is not None:
            return Violation(members[hit[0]], members[hit[1]], (p, q))
        return Pass()
    for a in members:
        for b in members:
            if a.bits != b.bits and q * (a.bits & ~b.bits).bit_count() == p * (b.bits & ~a.bits).bit_count():
                return Violation(a, b, (p, q))
    return Pass()


def ordered_pattern(a: SubsetWord, b: SubsetWord) -> bool:
    """True when ``|B \\ A| = 2|A \\ B| >= 2`` and every element of ``A \\ B`` precedes every element of ``B \\ A``."""
    if a.n != b.n:
        raise GroundSetMismatch(f"ground-set mismatch: {a.n} != {b.n}")
    lo = a.bits & ~b.bits
    hi = b.bits & ~a.bits
    d = lo.bit_count()
    return d >= 1 and hi.bit_count() == 2 * d and lo < (hi & -hi)


def _ordered_hit(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lo = a & ~b
    hi = b & ~a
    d = _popcount(lo)
    lowest = hi & (~hi + np.uint64(1))
    return (d >= 1) & (_popcount(hi) == 2 * d) & (lo < lowest)


def verify_ordered_tilted(family: SetFamily) -> Verdict:
    members = family.members()
    if not members:
        return Pass()
    if _vectorizable(family.n):
        arr = _as_array(members)
        hit = _first_hit(arr, arr, _ordered_hit)
        if hit is not None:
            return Violation(members[hit[0]], members[hit[1]], "ordered")
        return Pass()
    for a in members:
        for b in members:
            if ordered_pattern(a, b):
                return Violation(a, b, "ordered")
    return Pass()


def verify(cond: PairCondition, family: SetFamily) -> Verdict:
    if isinstance(cond, GxSystem):
        return verify_gx(family, cond.system)
    if isinstance(cond, TiltedRatio):
        return verify_tilted(family, cond.p, cond.q)
    if isinstance(cond, OrderedTilted):
        return verify_ordered_tilted(family)
    raise TypeError(f"unknown condition {cond!r}")


def layered_family(n: int, layers: Iterable[int]) -> SetFamily:
    """The union of the full layers listed in ``layers``."""
    layers = sorted(set(layers))
    if any(not 0 <= i <= n for i in layers):
        raise ValueError(f"layers must lie in [0, {n}]")
    size = sum(binomial(n, i) for i in layers)
    if size > MATERIALIZE_CAP:
        raise CapExceeded(f"layered family has {size} members, cap is {MATERIALIZE_CAP}")
    chosen = set(layers)
    return SetFamily(n, tuple(
        tuple(SubsetWord(n, m) for m in layer_masks(n, i)) if i in chosen else ()
        for i in range(n + 1)
    ))


def _exceeds_threshold(a: int, n: int, beta: Fraction) -> bool:
    """Exactly decide ``a > n/4 + beta * sqrt(n) / 2``."""
    lhs = 4 * a - n  # 4 (a - n/4) > 2 beta sqrt(n)
    return lhs > 0 and lhs * lhs > 4 * beta * beta * n


def counterexample_threshold(n: int, beta) -> int:
    """Smallest ``a`` with ``a > n/4 + beta sqrt(n)/2`` (may exceed ``n/2``)."""
    beta = Fraction(beta)
    a = 0
    while not _exceeds_threshold(a, n, beta):
        a += 1
    return a


def _check_counterexample_args(n: int, beta) -> Fraction:
    if n <= 0 or n % 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    beta = Fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    return beta


def counterexample_family(n: int, beta) -> SetFamily:
    """Sets with ``|A| <= n/2`` and ``|A ∩ [n/2]| > n/4 + beta sqrt(n)/2``."""
    beta = _check_counterexample_args(n, beta)
    size = count_counterexample(n, beta)
    if size > MATERIALIZE_CAP or n > 40:
        raise CapExceeded(f"counterexample family on n={n} is too large to materialise")
    half = n // 2
    a_min = counterexample_threshold(n, beta)
    out = []
    for a in range(a_min, half + 1):
        for left in layer_masks(half, a):
            for b in range(0, half - a + 1):
                for right in layer_masks(half, b):
                    out.append(SubsetWord(n, left | right << half))
    return SetFamily.from_sets(n, out)


def count_counterexample(n: int, beta) -> int:
    beta = _check_counterexample_args(n, beta)
    half = n // 2
    total = 0
    for a in range(counterexample_threshold(n, beta), half + 1):
        total += binomial(half, a) * sum(binomial(half, b) for b in range(half - a + 1))
    return total


def in_counterexample(s: SubsetWord, beta) -> bool:
    """Membership test for the counterexample family, straight from its definition."""
    n = s.n
    half = n // 2
    a = (s.bits & ((1 << half) - 1)).bit_count()
    return 2 * len(s) <= n and _exceeds_threshold(a, n, Fraction(beta))


def pair_bound_holds(diff: int, n: int, beta) -> bool:
    """Exactly decide ``diff <= n/2 - beta sqrt(n)``."""
    beta = Fraction(beta)
    slack = Fraction(n, 2) - diff
    return slack >= 0 and slack * slack >= beta * beta * n


def serialize_family(family: SetFamily) -> str:
    lines = [f"n={family.n}"] + [str(s) for s in family.members()]
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SetFamily:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("n="):
        raise FamilyFormatError('first line must be "n=<int>"')
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise FamilyFormatError(f"bad header {lines[0]!r}") from exc
    if n < 0:
        raise FamilyFormatError("n must be nonnegative")
    sets = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            sets.append(SubsetWord.parse(n, line))
        except ValueError as exc:
            raise FamilyFormatError(f"line {lineno}: {exc}") from exc
    try:
        return SetFamily.from_sets(n, sets)
    except ValueError as exc:
        raise FamilyFormatError(str(exc)) from exc
