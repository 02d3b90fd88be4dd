"""Extremal digraph families, cycle search, and mechanical checks of the
cycle-length characterisations for digraphs with minimum degree p-1."""

from .digraph import (
    DegreeProfile,
    Digraph,
    HypothesisReport,
    VertexSet,
    adjacency,
    arc_set,
    build,
    converse,
    induced,
    is_strong,
    isomorphic,
    meets_hypotheses,
    neighborhoods,
    strong_components,
)

__version__ = "0.1.0"
