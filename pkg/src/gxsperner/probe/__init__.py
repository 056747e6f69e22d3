"""Algorithmic probes: peeling, neighbour walks, the chain process and bound evaluators."""

from .bounds import BoundValue, LogReal, fr_bound, fr_brute, paper_bounds
from .chain import (
    ChainParams,
    ChainSample,
    MicroChainParams,
    ZoneIndex,
    alpha,
    chain_length,
    chain_point_probability,
    estimate_zone_prob,
    estimate_zone_probs,
    in_zone,
    log_point_probability,
    micro_chain_distribution,
    sample_chain,
    sample_chain_params,
    zone_of,
    zone_radius,
)
from .peel import neighbor_walk, neighbour_counts, peel
