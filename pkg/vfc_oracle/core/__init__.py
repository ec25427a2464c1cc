"""Core data structures of the vertex-failure connectivity oracle."""

from vfc_oracle.core.baseline import BaselineOracle
from vfc_oracle.core.counters import OpCounters, Phase
from vfc_oracle.core.cut import (
    CutOracle,
    SteinerCutOracle,
    build_cut_oracle,
    build_steiner,
    cut_query,
    cut_query_kconnected,
    steiner_query,
)
from vfc_oracle.core.decomposition import (
    TreeDecomp,
    build_unbreakable_decomposition,
    regularize,
    validate_decomposition,
    verify_unbreakable,
)
from vfc_oracle.core.exceptions import (
    BudgetExceededError,
    ContractViolation,
    DecompositionBudgetExceeded,
    GraphFormatError,
    OracleError,
    WorkloadError,
)
from vfc_oracle.core.graph import Graph, brute_components, brute_connected, load_graph, sparsify, write_graph
from vfc_oracle.core.models import (
    BuildSummary,
    Command,
    CommandKind,
    FailureSet,
    Mismatch,
    OracleConfigTag,
    Report,
    SmallGraphKind,
    VerifySummary,
)
from vfc_oracle.core.oracle import Oracle, preprocess
from vfc_oracle.core.smallgraph import SmallGraph
from vfc_oracle.core.torso import Torso, TorsoStore
from vfc_oracle.core.tree import ShortcutIndex, TreeIndex

__all__ = [
    # Errors
    "OracleError",
    "GraphFormatError",
    "WorkloadError",
    "BudgetExceededError",
    "DecompositionBudgetExceeded",
    "ContractViolation",
    # Models
    "BuildSummary",
    "Command",
    "CommandKind",
    "FailureSet",
    "Mismatch",
    "OracleConfigTag",
    "Report",
    "SmallGraphKind",
    "VerifySummary",
    # Graphs and decompositions
    "Graph",
    "load_graph",
    "write_graph",
    "sparsify",
    "brute_connected",
    "brute_components",
    "TreeDecomp",
    "build_unbreakable_decomposition",
    "regularize",
    "validate_decomposition",
    "verify_unbreakable",
    "TreeIndex",
    "ShortcutIndex",
    "SmallGraph",
    "Torso",
    "TorsoStore",
    # Oracles
    "OpCounters",
    "Phase",
    "BaselineOracle",
    "Oracle",
    "preprocess",
    "CutOracle",
    "SteinerCutOracle",
    "build_cut_oracle",
    "build_steiner",
    "cut_query",
    "cut_query_kconnected",
    "steiner_query",
]
