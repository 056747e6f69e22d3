"""The random chain process used in the averaging argument for the ordered
pattern, its zones, Monte Carlo zone probabilities and exact point probabilities.

The ground set splits into a left block ``[1, m1]`` and a right block
``[m1 + 1, m1 + m2]``.  A uniformly random ordered ``K``-tuple ``U`` is drawn
from the left block and an ordered ``2K``-tuple ``V`` from the right; ``S1``
and ``S2`` are Bernoulli subsets of what is left.  Then

    C_k = (U minus {u_1..u_k}) ∪ S1 ∪ {v_{2K-2k+1}..v_{2K}} ∪ S2,   0 <= k <= K,

so going from ``C_k`` to ``C_l`` (k < l) drops ``l - k`` left elements and adds
``2(l - k)`` right elements: every pair of chain members is an ordered-tilted pair.

``log`` is the natural logarithm throughout.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..lattice import SubsetWord

PRECISION_DPS = 50


def zone_radius(n: int) -> int:
    """Largest admissible ``|i|``, ``|j|``: ``floor(sqrt(log n) / 2)``."""
    if n < 2:
        return 0
    return int(math.sqrt(math.log(n)) / 2)


def _check_n(n: int) -> None:
    if n <= 0 or n % 6:
        raise ValueError(f"n={n} must be a positive multiple of 6")


@dataclass(frozen=True)
class ZoneIndex:
    n: int
    i: int
    j: int

    def __post_init__(self):
        _check_n(self.n)
        bound = zone_radius(self.n)
        if abs(self.i) > bound or abs(self.j) > bound:
            raise ValueError(f"zone index ({self.i},{self.j}) outside |i|,|j| <= {bound}")

    @property
    def L(self) -> int:
        return math.isqrt(self.n)

    def r_window(self) -> tuple[int, int]:
        return 2 * self.i * self.L - self.L, 2 * self.i * self.L + self.L - 1

    def s_window(self) -> tuple[int, int]:
        return 2 * self.j * self.L - self.L, 2 * self.j * self.L + self.L - 1


def chain_length(n: int) -> int:
    """``K = floor(sqrt(n) / 12)``."""
    return math.isqrt(n) // 12


def zone_of(d: SubsetWord, n: int | None = None) -> tuple[int, int]:
    """``(r_D, s_D) = (|D ∩ [n/3]| - n/6, |D ∩ [n/3+1, n]| - n/3)``."""
    n = d.n if n is None else n
    _check_n(n)
    if d.n != n:
        raise ValueError(f"set lives on [{d.n}], expected [{n}]")
    left_mask = (1 << (n // 3)) - 1
    left = (d.bits & left_mask).bit_count()
    right = (d.bits >> (n // 3)).bit_count()
    return left - n // 6, right - n // 3


def in_zone(d: SubsetWord, z: ZoneIndex) -> bool:
    r, s = zone_of(d, z.n)
    r_lo, r_hi = z.r_window()
    s_lo, s_hi = z.s_window()
    return r_lo <= r <= r_hi and s_lo <= s <= s_hi


def zones_containing(d: SubsetWord, n: int) -> list[ZoneIndex]:
    bound = zone_radius(n)
    return [ZoneIndex(n, i, j) for i in range(-bound, bound + 1)
            for j in range(-bound, bound + 1) if in_zone(d, ZoneIndex(n, i, j))]


@dataclass(frozen=True)
class ChainParams:
    """Block sizes, chain length and inclusion probabilities of the process."""

    m1: int
    m2: int
    K: int
    p1: object  # float, Fraction or mpf
    p2: object

    def __post_init__(self):
        if self.K < 0 or self.K > self.m1 or 2 * self.K > self.m2:
            raise ValueError(f"need K <= m1 and 2K <= m2, got K={self.K}, m1={self.m1}, m2={self.m2}")
        for p in (self.p1, self.p2):
            if not 0 < p < 1:
                raise ValueError(f"inclusion probability {p} outside (0, 1)")

    @property
    def n(self) -> int:
        return self.m1 + self.m2

    @classmethod
    def for_zone(cls, n: int, i: int, j: int) -> "ChainParams":
        """Full-scale parameters: ``p1 = 1/2 + 6i/sqrt(n)``, ``p2 = 1/2 + 3j/sqrt(n)``."""
        ZoneIndex(n, i, j)
        with mpmath.workdps(PRECISION_DPS):
            root = mpmath.sqrt(n)
            p1 = mpmath.mpf(1) / 2 + 6 * i / root
            p2 = mpmath.mpf(1) / 2 + 3 * j / root
        return cls(n // 3, n - n // 3, chain_length(n), p1, p2)


MicroChainParams = ChainParams


@dataclass(frozen=True)
class ChainSample:
    n: int
    K: int
    U: tuple[int, ...]
    V: tuple[int, ...]
    S1: SubsetWord
    S2: SubsetWord
    seed: tuple[int, ...]
    chain: tuple[SubsetWord, ...] = field(repr=False)

    def left_part(self, k: int) -> SubsetWord:
        return SubsetWord.from_elements(self.n, self.U[k:]) | self.S1

    def right_part(self, k: int) -> SubsetWord:
        return SubsetWord.from_elements(self.n, self.V[2 * self.K - 2 * k:]) | self.S2


def _bool_to_bits(flags: np.ndarray, offset: int) -> int:
    packed = np.packbits(flags, bitorder="little").tobytes()
    return int.from_bytes(packed, "little") << offset


def sample_chain_params(params: ChainParams, rng: np.random.Generator,
                        seed: tuple[int, ...] = ()) -> ChainSample:
    m1, m2, K, n = params.m1, params.m2, params.K, params.n
    u = rng.choice(m1, size=K, replace=False)
    v = rng.choice(m2, size=2 * K, replace=False)
    s1 = rng.random(m1) < float(params.p1)
    s1[u] = False
    s2 = rng.random(m2) < float(params.p2)
    s2[v] = False
    U = tuple(int(x) + 1 for x in u)
    V = tuple(int(x) + m1 + 1 for x in v)
    S1 = SubsetWord(n, _bool_to_bits(s1, 0))
    S2 = SubsetWord(n, _bool_to_bits(s2, m1))
    u_bits = [1 << (x - 1) for x in U]
    v_bits = [1 << (x - 1) for x in V]
    chain = []
    for k in range(K + 1):
        bits = S1.bits | S2.bits
        for b in u_bits[k:]:
            bits |= b
        for b in v_bits[2 * K - 2 * k:]:
            bits |= b
        chain.append(SubsetWord(n, bits))
    return ChainSample(n, K, U, V, S1, S2, seed, tuple(chain))


def _trial_rng(seed: int, trial: int | None) -> tuple[np.random.Generator, tuple[int, ...]]:
    key = (seed,) if trial is None else (seed, trial)
    return np.random.default_rng(list(key)), key


def sample_chain(n: int, i: int, j: int, seed: int, trial: int | None = None) -> ChainSample:
    """One draw of the process for zone ``(i, j)``, reproducible from ``(seed, trial)``."""
    params = ChainParams.for_zone(n, i, j)
    rng, key = _trial_rng(seed, trial)
    return sample_chain_params(params, rng, key)


def estimate_zone_probs(n: int, z: ZoneIndex, ks, trials: int, seed: int) -> dict[int, tuple[float, float]]:
    """Monte Carlo ``P(C_k in zone)`` for several ``k`` from shared chains.

    Trial ``r`` draws from the substream ``(seed, r)``, so the estimates do
    not depend on evaluation order.  Returns ``{k: (estimate, standard error)}``.
    """
    if z.n != n:
        raise ValueError("zone index belongs to a different n")
    K = chain_length(n)
    ks = list(ks)
    if any(not 0 <= k <= K for k in ks):
        raise ValueError(f"k must lie in [0, {K}]")
    if trials < 1:
        raise ValueError("trials must be positive")
    params = ChainParams.for_zone(n, z.i, z.j)
    hits = dict.fromkeys(ks, 0)
    for r in range(trials):
        rng, key = _trial_rng(seed, r)
        sample = sample_chain_params(params, rng, key)
        for k in ks:
            hits[k] += in_zone(sample.chain[k], z)
    out = {}
    for k in ks:
        est = hits[k] / trials
        out[k] = (est, math.sqrt(est * (1 - est) / trials))
    return out


def estimate_zone_prob(n: int, z: ZoneIndex, k: int, trials: int, seed: int) -> tuple[float, float]:
    return estimate_zone_probs(n, z, [k], trials, seed)[k]


def _split_counts(params: ChainParams, a: SubsetWord) -> tuple[int, int]:
    if a.n != params.n:
        raise ValueError(f"set lives on [{a.n}], process on [{params.n}]")
    left = (a.bits & ((1 << params.m1) - 1)).bit_count()
    return left, len(a) - left


def log_point_probability(params: ChainParams, a1: int, a2: int, k: int):
    """Natural log of ``P(C_k = A)`` for any ``A`` with ``a1`` left and ``a2`` right
    elements; ``-inf`` when the event is impossible."""
    m1, m2, K = params.m1, params.m2, params.K
    if not 0 <= k <= K:
        raise ValueError(f"k must lie in [0, {K}]")
    if not (0 <= a1 <= m1 and 0 <= a2 <= m2):
        raise ValueError("counts outside the blocks")
    # Left: u_1..u_k avoid A, u_{k+1}..u_K lie in A, S1 is the rest of A.
    # Right: v_1..v_{2K-2k} avoid A, the last 2k lie in A, S2 is the rest of A.
    e_p1, e_q1 = a1 - (K - k), m1 - a1 - k
    e_p2, e_q2 = a2 - 2 * k, m2 - a2 - (2 * K - 2 * k)
    if min(e_p1, e_q1, e_p2, e_q2) < 0:
        return mpmath.ninf
    with mpmath.workdps(PRECISION_DPS):
        lb = lambda x, y: mpmath.log(mpmath.binomial(x, y))  # noqa: E731
        p1, p2 = mpmath.mpf(params.p1), mpmath.mpf(params.p2)
        total = (
            lb(m1 - a1, k) + lb(a1, K - k) - lb(m1, K) - lb(K, k)
            + e_p1 * mpmath.log(p1) + e_q1 * mpmath.log(1 - p1)
            + lb(a2, 2 * k) + lb(m2 - a2, 2 * K - 2 * k) - lb(m2, 2 * K) - lb(2 * K, 2 * k)
            + e_p2 * mpmath.log(p2) + e_q2 * mpmath.log(1 - p2)
        )
        return +total


def chain_point_probability(params: ChainParams, a: SubsetWord, k: int):
    """Exact ``P(C_k = A)`` as a high-precision ``mpf``."""
    a1, a2 = _split_counts(params, a)
    lp = log_point_probability(params, a1, a2, k)
    with mpmath.workdps(PRECISION_DPS):
        return mpmath.mpf(0) if lp == mpmath.ninf else mpmath.exp(lp)


def alpha(n) -> object:
    """``exp(120 sqrt(log n))`` as an ``mpf``."""
    with mpmath.workdps(PRECISION_DPS):
        return mpmath.exp(120 * mpmath.sqrt(mpmath.log(n)))


def micro_chain_distribution(params: ChainParams) -> list[dict[int, float]]:
    """Distribution of every ``C_k`` by exhaustive enumeration of the random choices.

    The left choices (ordered ``U``, ``S1``) and right choices (ordered ``V``,
    ``S2``) are drawn independently, so each side is enumerated on its own and
    the joint law is their product.  Returns one ``{bits: probability}`` per ``k``.
    """
    m1, m2, K = params.m1, params.m2, params.K
    p1, p2 = float(params.p1), float(params.p2)

    def side(size: int, take: int, p: float, kept) -> list[dict[int, float]]:
        orderings = math.perm(size, take)
        groups: dict[tuple[int, ...], int] = defaultdict(int)
        for tup in itertools.permutations(range(size), take):
            used = 0
            for x in tup:
                used |= 1 << x
            groups[(used,) + tuple(kept(tup, k) for k in range(K + 1))] += 1
        out = [defaultdict(float) for _ in range(K + 1)]
        for key, mult in groups.items():
            used, fixed = key[0], key[1:]
            rest = [x for x in range(size) if not used >> x & 1]
            for r in range(len(rest) + 1):
                pr = mult / orderings * p ** r * (1 - p) ** (len(rest) - r)
                for combo in itertools.combinations(rest, r):
                    s = 0
                    for x in combo:
                        s |= 1 << x
                    for k in range(K + 1):
                        out[k][fixed[k] | s] += pr
        return out

    def left_kept(tup, k):
        bits = 0
        for x in tup[k:]:
            bits |= 1 << x
        return bits

    def right_kept(tup, k):
        bits = 0
        for x in tup[2 * K - 2 * k:]:
            bits |= 1 << x
        return bits

    left = side(m1, K, p1, left_kept)
    right = side(m2, 2 * K, p2, right_kept)
    joint = []
    for k in range(K + 1):
        dist = {}
        for lb, lp in left[k].items():
            for rb, rp in right[k].items():
                dist[lb | rb << m1] = lp * rp
        joint.append(dist)
    return joint
