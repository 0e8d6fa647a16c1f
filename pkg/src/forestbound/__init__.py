"""Induced-forest bounds on the dimension of graph-structured solution sets."""

from .graph import Graph, InducedSubgraph, build_family, components, induced, is_forest
from .forest import SearchBudget, best_forest, leaf_selection

__all__ = [
    "Graph",
    "InducedSubgraph",
    "build_family",
    "components",
    "induced",
    "is_forest",
    "SearchBudget",
    "best_forest",
    "leaf_selection",
]
__version__ = "0.1.0"
