"""Sumsets along graphs, arithmetic progressions and the incidence structures that find them."""

from apgraph.exact import (
    APWitness,
    NumberSet,
    PairGraph,
    count_k_aps,
    difference_set_along_graph,
    doubling_ratio,
    iterated_sumset,
    make_number_set,
    sumset_along_graph,
)

__version__ = "0.1.0"

__all__ = [
    "APWitness",
    "NumberSet",
    "PairGraph",
    "count_k_aps",
    "difference_set_along_graph",
    "doubling_ratio",
    "iterated_sumset",
    "make_number_set",
    "sumset_along_graph",
]
