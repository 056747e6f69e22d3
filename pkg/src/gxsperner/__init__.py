"""Forbidden-intersection set families on the Boolean lattice: restriction
systems, layer weights, verifiers, exact search and proof probes."""

__version__ = "0.1.0"

from .families import (
    Pass,
    SetFamily,
    Violation,
    count_counterexample,
    counterexample_family,
    layered_family,
    parse_family,
    serialize_family,
    verify,
    verify_gx,
    verify_ordered_tilted,
    verify_tilted,
)
from .lattice import SubsetWord, binomial, diff_size, is_neighbor, layer_iter
from .restrictions import (
    Edge,
    GxSystem,
    OrderedTilted,
    RestrictionSystem,
    TiltedRatio,
    parse_system,
    serialize_system,
    sperner_system,
    tilted_system,
    validate_system,
)
from .search import build_violation_graph, exhaustive_oracle, max_family
from .weight import weight
