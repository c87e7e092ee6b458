"""Reading dependency graphs and layer assignments."""

from .formats import (
    BOTTOM_FIRST,
    FORMATS,
    TOP_FIRST,
    ColumnCountError,
    DanglingEndpointError,
    DuplicateAssignmentError,
    DuplicateNodeError,
    EmptyIdError,
    GraphDocument,
    IngestError,
    LayersDocument,
    MalformedInputError,
    NodeDecl,
    SchemaError,
    UnboundElementError,
    UnknownDirectionError,
    UnsupportedConstructError,
    document_from_graph,
    emit_csv_edges,
    emit_dot,
    emit_json_graph,
    emit_layers,
    parse_csv_edges,
    parse_dot_subset,
    parse_graph,
    parse_json_graph,
    parse_layer_assignment,
)
from .java import ExtractionResult, extract_java_package_deps, strip_comments_and_literals

__all__ = [
    "BOTTOM_FIRST",
    "FORMATS",
    "TOP_FIRST",
    "ColumnCountError",
    "DanglingEndpointError",
    "DuplicateAssignmentError",
    "DuplicateNodeError",
    "EmptyIdError",
    "ExtractionResult",
    "GraphDocument",
    "IngestError",
    "LayersDocument",
    "MalformedInputError",
    "NodeDecl",
    "SchemaError",
    "UnboundElementError",
    "UnknownDirectionError",
    "UnsupportedConstructError",
    "document_from_graph",
    "emit_csv_edges",
    "emit_dot",
    "emit_json_graph",
    "emit_layers",
    "extract_java_package_deps",
    "parse_csv_edges",
    "parse_dot_subset",
    "parse_graph",
    "parse_json_graph",
    "parse_layer_assignment",
    "strip_comments_and_literals",
]
