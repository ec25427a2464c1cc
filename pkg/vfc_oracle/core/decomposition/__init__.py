"""Unbreakable tree decompositions and their bag graphs."""

from vfc_oracle.core.decomposition.bag_graph import NORMAL, BagGraph, build_bag_graph, build_bag_graphs
from vfc_oracle.core.decomposition.builder import build_unbreakable_decomposition
from vfc_oracle.core.decomposition.dot import to_dot
from vfc_oracle.core.decomposition.regularize import regularize
from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp, renumber
from vfc_oracle.core.decomposition.verify import breaking_separator, validate_decomposition, verify_unbreakable

__all__ = [
    "NORMAL",
    "BagGraph",
    "TreeDecomp",
    "breaking_separator",
    "build_bag_graph",
    "build_bag_graphs",
    "build_unbreakable_decomposition",
    "regularize",
    "renumber",
    "to_dot",
    "validate_decomposition",
    "verify_unbreakable",
]
