"""Base-8 encoding of P[3m] and combinatorial-line search over {0..k-1}^m.

A subset ``x`` of ``[3m]`` maps to the word ``y`` with
``y_i = x_i + 2 x_{i+m} + 4 x_{i+2m}``.  On a line over the 8-letter alphabet
the points with wildcard value 1 and 6 decode to an ordered-tilted pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .families import ordered_pattern
from .lattice import SubsetWord

TEMPLATE_CAP = 10_000_000


def dhj_encode(x: SubsetWord) -> tuple[int, ...]:
    if x.n % 3:
        raise ValueError(f"ground-set size {x.n} is not divisible by 3")
    m = x.n // 3
    b = x.bits
    return tuple(
        (b >> i & 1) | (b >> (i + m) & 1) << 1 | (b >> (i + 2 * m) & 1) << 2
        for i in range(m)
    )


def dhj_decode(word: Iterable[int], m: int | None = None) -> SubsetWord:
    word = tuple(word)
    if m is None:
        m = len(word)
    if len(word) != m:
        raise ValueError(f"word has length {len(word)}, expected {m}")
    bits = 0
    for i, y in enumerate(word):
        if not 0 <= y <= 7:
            raise ValueError(f"digit {y} outside 0..7")
        bits |= (y & 1) << i | (y >> 1 & 1) << (i + m) | (y >> 2 & 1) << (i + 2 * m)
    return SubsetWord(3 * m, bits)


@dataclass(frozen=True)
class CombinatorialLine:
    """A template over ``{0..k-1, *}``; ``None`` marks an active (wildcard) coordinate."""

    template: tuple[int | None, ...]
    k: int

    def __post_init__(self):
        if None not in self.template:
            raise ValueError("a line needs a nonempty active coordinate set")

    @property
    def m(self) -> int:
        return len(self.template)

    @property
    def active(self) -> tuple[int, ...]:
        """Active coordinates, 1-based."""
        return tuple(i + 1 for i, c in enumerate(self.template) if c is None)

    def point(self, value: int) -> tuple[int, ...]:
        if not 0 <= value < self.k:
            raise ValueError(f"value {value} outside 0..{self.k - 1}")
        return tuple(value if c is None else c for c in self.template)

    def points(self) -> list[tuple[int, ...]]:
        return [self.point(v) for v in range(self.k)]

    def __str__(self) -> str:
        return "".join("*" if c is None else str(c) for c in self.template)


def find_combinatorial_line(words, k: int, m: int) -> CombinatorialLine | None:
    """First line (templates in lexicographic order, ``*`` after every digit) lying in ``words``."""
    n_templates = (k + 1) ** m - k ** m
    if n_templates > TEMPLATE_CAP:
        raise ValueError(f"{n_templates} templates exceed the cap {TEMPLATE_CAP}")
    s = {tuple(w) for w in words}
    symbols = list(range(k)) + [None]
    for template in itertools.product(symbols, repeat=m):
        if None not in template:
            continue
        if all(tuple(v if c is None else c for c in template) in s for v in range(k)):
            return CombinatorialLine(template, k)
    return None


def dhj_forbidden_pair(line: CombinatorialLine, m: int | None = None) -> tuple[SubsetWord, SubsetWord, bool]:
    """Decode the points with wildcard 1 and 6; ``check`` says whether they form the ordered pattern."""
    if line.k != 8:
        raise ValueError("the forbidden pair is defined for lines over 8 letters")
    if m is not None and m != line.m:
        raise ValueError(f"line has {line.m} coordinates, expected {m}")
    a = dhj_decode(line.point(1))
    b = dhj_decode(line.point(6))
    return a, b, ordered_pattern(a, b)
