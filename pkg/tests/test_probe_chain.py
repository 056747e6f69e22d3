import math
import random

import mpmath
import numpy as np
import pytest

from gxsperner.families import SetFamily, verify_ordered_tilted
from gxsperner.lattice import SubsetWord
from gxsperner.probe.chain import (
    ChainParams,
    ZoneIndex,
    alpha,
    chain_length,
    chain_point_probability,
    estimate_zone_prob,
    estimate_zone_probs,
    log_point_probability,
    micro_chain_distribution,
    sample_chain,
    sample_chain_params,
    zone_of,
    zone_radius,
    zones_containing,
)

MICRO_SETTINGS = [(0.5, 0.5), (0.3, 0.65)]


@pytest.fixture(scope="module", params=MICRO_SETTINGS, ids=["half", "skewed"])
def micro(request):
    params = ChainParams(6, 12, 2, *request.param)
    return params, micro_chain_distribution(params)


def test_zone_examples():
    d = SubsetWord.from_elements(12, [1, 2, 5, 6, 7, 8])
    assert zone_of(d, 12) == (0, 0)
    assert zone_of(SubsetWord(12, 0), 12) == (-2, -4)
    with pytest.raises(ValueError):
        zone_of(SubsetWord(10, 0), 10)


def test_zone_parameters():
    assert chain_length(10002) == 8
    assert zone_radius(10002) == 1
    assert zone_radius(576) == 1
    with pytest.raises(ValueError):
        ZoneIndex(576, 2, 0)


def test_zones_partition():
    n = 576
    L = math.isqrt(n)
    bound = zone_radius(n)
    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(10 ** 4):
        bits = rng.random(n) < 0.5
        d = SubsetWord(n, int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little"))
        r, s = zone_of(d, n)
        zones = zones_containing(d, n)
        covered = all(-(2 * bound + 1) * L <= v <= (2 * bound + 1) * L - 1 for v in (r, s))
        assert len(zones) == (1 if covered else 0)
        hits += len(zones)
    assert hits > 9000


def test_chain_invariants():
    n = 576
    for trial in range(20):
        sample = sample_chain(n, 0, 1, seed=1, trial=trial)
        K = sample.K
        left = lambda d: (d.bits & ((1 << n // 3) - 1)).bit_count()  # noqa: E731
        c0, cK = sample.chain[0], sample.chain[K]
        assert left(cK) - left(c0) == -K
        assert (len(cK) - left(cK)) - (len(c0) - left(c0)) == 2 * K
        for k in range(K + 1):
            assert sample.chain[k] == sample.left_part(k) | sample.right_part(k)
        for k in range(K + 1):
            for l in range(k + 1, K + 1):
                assert not verify_ordered_tilted(SetFamily.from_sets(n, [sample.chain[k], sample.chain[l]]))


def test_chain_determinism():
    a = sample_chain(576, 0, 0, seed=42)
    b = sample_chain(576, 0, 0, seed=42)
    assert a == b
    assert sample_chain(576, 0, 0, seed=43) != a


def test_estimate_order_independent():
    z = ZoneIndex(576, 0, 0)
    both = estimate_zone_probs(576, z, [0, 2], trials=200, seed=5)
    assert estimate_zone_prob(576, z, 2, trials=200, seed=5) == both[2]


def test_estimate_standard_error():
    n = 10002
    K = chain_length(n)
    est, se = estimate_zone_prob(n, ZoneIndex(n, 1, 1), K, trials=2000, seed=0)
    assert 0 <= est <= 1
    assert se <= 0.5 / math.sqrt(2000)


def test_micro_matches_closed_form(micro):
    params, dist = micro
    cache = {}
    for k, table in enumerate(dist):
        for bits, prob in table.items():
            a1 = (bits & 0b111111).bit_count()
            a2 = bits.bit_count() - a1
            key = (a1, a2, k)
            if key not in cache:
                lp = log_point_probability(params, a1, a2, k)
                cache[key] = float(mpmath.exp(lp))
            assert abs(cache[key] - prob) <= 1e-12


def test_closed_form_zero_off_support(micro):
    params, dist = micro
    for k, table in enumerate(dist):
        for bits in range(1 << params.n):
            if bits not in table:
                a = SubsetWord(params.n, bits)
                assert chain_point_probability(params, a, k) == 0


def test_closed_form_normalises():
    for p1, p2 in MICRO_SETTINGS:
        params = ChainParams(6, 12, 2, p1, p2)
        for k in range(3):
            with mpmath.workdps(50):
                total = mpmath.fsum(
                    math.comb(6, a1) * math.comb(12, a2) * mpmath.exp(log_point_probability(params, a1, a2, k))
                    for a1 in range(7) for a2 in range(13)
                )
            assert abs(total - 1) <= 1e-9


def test_monte_carlo_matches_exact():
    params = ChainParams(6, 12, 2, 0.5, 0.5)
    rng = np.random.default_rng(17)
    trials = 20000
    counts = [{} for _ in range(3)]
    for _ in range(trials):
        sample = sample_chain_params(params, rng)
        for k in range(3):
            key = (sample.chain[k].bits & 0b111111).bit_count(), len(sample.chain[k])
            counts[k][key] = counts[k].get(key, 0) + 1
    # compare the law of (left count, size), the finest statistic with many hits per cell
    for k in range(3):
        for (a1, size), hits in counts[k].items():
            a2 = size - a1
            exact = float(math.comb(6, a1) * math.comb(12, a2)
                          * mpmath.exp(log_point_probability(params, a1, a2, k)))
            est = hits / trials
            se = math.sqrt(exact * (1 - exact) / trials)
            assert abs(est - exact) <= 3 * se + 1e-12


def test_same_zone_ratio_small_sample():
    n = 10002
    rng = random.Random(6)
    bound = mpmath.log(alpha(n))
    for _ in range(50):
        i, j = rng.choice([-1, 0, 1]), rng.choice([-1, 0, 1])
        z = ZoneIndex(n, i, j)
        params = ChainParams.for_zone(n, i, j)
        k = rng.randint(0, params.K)
        (rlo, rhi), (slo, shi) = z.r_window(), z.s_window()
        logs = []
        for _ in range(2):
            a1 = n // 6 + rng.randint(rlo, rhi)
            a2 = n // 3 + rng.randint(slo, shi)
            logs.append(log_point_probability(params, a1, a2, k))
        assert abs(logs[0] - logs[1]) <= bound


def test_params_validation():
    with pytest.raises(ValueError):
        ChainParams(2, 12, 3, 0.5, 0.5)
    with pytest.raises(ValueError):
        ChainParams(6, 12, 2, 0, 0.5)
    params = ChainParams(6, 12, 2, 0.5, 0.5)
    with pytest.raises(ValueError):
        log_point_probability(params, 1, 1, 3)
