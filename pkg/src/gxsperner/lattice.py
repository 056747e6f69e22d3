"""Subsets of [n] as bit vectors, layer enumeration and exact binomials.

Element ``e`` of ``[n] = {1, ..., n}`` is stored in bit ``e - 1`` of a Python
integer, so set algebra is word-parallel and ``int.bit_count`` gives popcount.
Colex order on a fixed layer coincides with numeric order of the bit pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator


class GroundSetMismatch(ValueError):
    pass


@dataclass(frozen=True, order=False)
class SubsetWord:
    """An immutable subset of ``[n]``."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"ground-set size must be nonnegative, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"subset has elements outside [1, {self.n}]")

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "SubsetWord":
        bits = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"element {e} outside [1, {n}]")
            bits |= 1 << (e - 1)
        return cls(n, bits)

    @classmethod
    def parse(cls, n: int, text: str) -> "SubsetWord":
        """Parse the comma-list form, e.g. ``"1,3,5"``; the empty string is the empty set."""
        text = text.strip()
        if not text:
            return cls(n, 0)
        try:
            elements = [int(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"malformed subset {text!r}") from exc
        if len(set(elements)) != len(elements):
            raise ValueError(f"repeated element in {text!r}")
        return cls.from_elements(n, elements)

    def elements(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length())
            b ^= low
        return out

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, e: int) -> bool:
        return 1 <= e <= self.n and bool(self.bits >> (e - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def _check(self, other: "SubsetWord") -> None:
        if self.n != other.n:
            raise GroundSetMismatch(f"ground-set mismatch: {self.n} != {other.n}")

    def __and__(self, other: "SubsetWord") -> "SubsetWord":
        self._check(other)
        return SubsetWord(self.n, self.bits & other.bits)

    def __or__(self, other: "SubsetWord") -> "SubsetWord":
        self._check(other)
        return SubsetWord(self.n, self.bits | other.bits)

    def __sub__(self, other: "SubsetWord") -> "SubsetWord":
        self._check(other)
        return SubsetWord(self.n, self.bits & ~other.bits)

    def __xor__(self, other: "SubsetWord") -> "SubsetWord":
        self._check(other)
        return SubsetWord(self.n, self.bits ^ other.bits)

    def complement(self) -> "SubsetWord":
        return SubsetWord(self.n, ((1 << self.n) - 1) ^ self.bits)

    def issubset(self, other: "SubsetWord") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def min(self) -> int:
        if not self.bits:
            raise ValueError("empty set has no minimum")
        return (self.bits & -self.bits).bit_length()

    def max(self) -> int:
        if not self.bits:
            raise ValueError("empty set has no maximum")
        return self.bits.bit_length()

    def colex_key(self) -> tuple[int, int]:
        """Sort key giving (layer, colex) order."""
        return (self.bits.bit_count(), self.bits)

    def __str__(self) -> str:
        return ",".join(map(str, self.elements()))

    def __repr__(self) -> str:
        return f"SubsetWord(n={self.n}, {{{self}}})"


def diff_size(a: SubsetWord, b: SubsetWord) -> int:
    """``|A \\ B|``."""
    if a.n != b.n:
        raise GroundSetMismatch(f"ground-set mismatch: {a.n} != {b.n}")
    return (a.bits & ~b.bits).bit_count()


def is_neighbor(a: SubsetWord, b: SubsetWord) -> bool:
    if a.n != b.n:
        raise GroundSetMismatch(f"ground-set mismatch: {a.n} != {b.n}")
    return (a.bits ^ b.bits).bit_count() == 2


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def layer_masks(n: int, k: int) -> Iterator[int]:
    """Bit patterns of the k-subsets of [n] in colex order (Gosper's hack)."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def layer_iter(n: int, k: int) -> Iterator[SubsetWord]:
    for bits in layer_masks(n, k):
        yield SubsetWord(n, bits)


def full_set(n: int) -> SubsetWord:
    return SubsetWord(n, (1 << n) - 1)


def interval(n: int, lo: int, hi: int) -> SubsetWord:
    """The set ``{lo, ..., hi}`` inside ``[n]`` (empty when ``lo > hi``)."""
    if lo > hi:
        return SubsetWord(n, 0)
    if lo < 1 or hi > n:
        raise ValueError(f"interval [{lo}, {hi}] outside [1, {n}]")
    return SubsetWord(n, ((1 << (hi - lo + 1)) - 1) << (lo - 1))
