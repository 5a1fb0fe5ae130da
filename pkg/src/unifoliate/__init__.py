"""Desk-scale toolkit for chromatic thresholds of r-uniform hypergraphs."""

from .hypercore import (
    Coloring,
    Cycle,
    Hypergraph,
    HypergraphError,
    chromatic_number,
    enumerate_cycles,
    greedy_color,
    independence_number,
    is_hyperforest,
    is_hypertree,
    iter_cycles,
)

__version__ = "0.1.0"
