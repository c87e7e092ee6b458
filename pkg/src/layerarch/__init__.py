"""Layered-architecture conformance metrics over package dependency graphs."""

from .graph import (
    AssignmentError,
    CycleEnumeration,
    DependencyEdge,
    GraphError,
    LayerAssignment,
    LayeredGraph,
    ProgramElement,
    SccDecomposition,
    enumerate_simple_cycles,
    scc_decompose,
)
from .metrics import (
    DEFAULT_PENALTY_SWEEP,
    EdgeClass,
    MetricsReport,
    PenaltyConfig,
    Ratio,
    Style,
    StyleThresholds,
    analyze,
    classify_edges,
    violation_sets,
)
from .samples import sample_network2

__version__ = "0.1.0"

__all__ = [
    "AssignmentError",
    "CycleEnumeration",
    "DEFAULT_PENALTY_SWEEP",
    "DependencyEdge",
    "EdgeClass",
    "GraphError",
    "LayerAssignment",
    "LayeredGraph",
    "MetricsReport",
    "PenaltyConfig",
    "ProgramElement",
    "Ratio",
    "SccDecomposition",
    "Style",
    "StyleThresholds",
    "analyze",
    "classify_edges",
    "enumerate_simple_cycles",
    "sample_network2",
    "scc_decompose",
    "violation_sets",
]
