"""Synthetic layered dependency networks with controlled violation rates.

Randomness comes from :class:`random.Random` (Mersenne Twister), whose
``random()`` stream is fixed for a given integer seed across platforms and
Python versions, so generated fixtures are stable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .graph import LayerAssignment, LayeredGraph


@dataclass(frozen=True)
class GenSpec:
    layer_count: int
    nodes_per_layer: Sequence[int]
    p_down_adjacent: float = 0.0
    p_intra: float = 0.0
    p_back: float = 0.0
    p_skip: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.layer_count < 1:
            raise ValueError("layer_count must be >= 1")
        if len(self.nodes_per_layer) != self.layer_count:
            raise ValueError("nodes_per_layer needs one entry per layer")
        if any(k < 1 for k in self.nodes_per_layer):
            raise ValueError("every layer needs at least one node")
        for name in ("p_down_adjacent", "p_intra", "p_back", "p_skip"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def pair_probability(spec: GenSpec, src_layer: int, dst_layer: int) -> float:
    """Arc probability for an ordered pair, by the class its layers imply."""
    if src_layer == dst_layer:
        return spec.p_intra
    if src_layer > dst_layer:
        return spec.p_back
    if dst_layer - src_layer == 1:
        return spec.p_down_adjacent
    return spec.p_skip


def node_name(layer: int, index: int) -> str:
    return f"l{layer}.p{index}"


def generate(spec: GenSpec) -> LayeredGraph:
    """Draw one arc per ordered node pair with its class probability.

    Pairs are visited source-major in node order, one uniform draw each.
    """
    rng = random.Random(spec.seed)
    names: list[str] = []
    layer_of: dict[str, int] = {}
    for layer, count in enumerate(spec.nodes_per_layer, start=1):
        for i in range(count):
            name = node_name(layer, i)
            names.append(name)
            layer_of[name] = layer
    edges = []
    for src in names:
        for dst in names:
            if src == dst:
                continue
            if rng.random() < pair_probability(spec, layer_of[src], layer_of[dst]):
                edges.append((src, dst))
    return LayeredGraph.build(names, edges, LayerAssignment(spec.layer_count, layer_of))
