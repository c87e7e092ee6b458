"""Bundled example networks."""

from __future__ import annotations

from importlib import resources

from .graph import LayeredGraph
from .ingest import GraphDocument, parse_json_graph

SAMPLE_NETWORK2 = "sample_network2.json"


def sample_network2_text() -> str:
    """Ten packages, fifteen arcs, three layers; one cycle-bearing SCC."""
    return resources.files("layerarch").joinpath("data", SAMPLE_NETWORK2).read_text(encoding="utf-8")


def sample_network2_document() -> GraphDocument:
    return parse_json_graph(sample_network2_text(), source=SAMPLE_NETWORK2)


def sample_network2() -> LayeredGraph:
    return sample_network2_document().to_layered_graph()
