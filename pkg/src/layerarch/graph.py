"""Dependency graph, layer assignment and cycle machinery.

Layers are numbered from 1 at the top, increasing downward.  Elements and
edges are addressed by dense integer ids in declaration order.  Parallel
edges are kept and counted with multiplicity; self-loops are not allowed
inside a :class:`LayeredGraph` (use :meth:`LayeredGraph.build` to drop them
with a warning).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

DEFAULT_CYCLE_LIMIT = 10_000


class GraphError(ValueError):
    """Invalid graph or layer assignment."""


class AssignmentError(GraphError):
    """An element has no layer, or a layer index is out of range."""


@dataclass(frozen=True)
class ProgramElement:
    id: int
    name: str
    metadata: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DependencyEdge:
    id: int
    src: int
    dst: int


@dataclass(frozen=True)
class LayerAssignment:
    """Total many-to-one map from element name to layer index (1 = top)."""

    layer_count: int
    layer_of: Mapping[str, int]
    layer_names: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.layer_count < 1:
            raise AssignmentError(f"layer_count must be >= 1, got {self.layer_count}")
        for name, layer in self.layer_of.items():
            if not 1 <= layer <= self.layer_count:
                raise AssignmentError(
                    f"element {name!r} assigned to layer {layer}, "
                    f"outside 1..{self.layer_count}"
                )

    def members(self, layer: int) -> list[str]:
        return [name for name, l in self.layer_of.items() if l == layer]

    def as_lists(self) -> list[list[str]]:
        """Members per layer, top layer first, in insertion order."""
        out: list[list[str]] = [[] for _ in range(self.layer_count)]
        for name, layer in self.layer_of.items():
            out[layer - 1].append(name)
        return out

    @classmethod
    def from_lists(
        cls, layers: Sequence[Sequence[str]], names: Sequence[str | None] | None = None
    ) -> "LayerAssignment":
        """Build from member lists ordered top layer first."""
        layer_of: dict[str, int] = {}
        for index, members in enumerate(layers, start=1):
            for name in members:
                if name in layer_of:
                    raise AssignmentError(
                        f"element {name!r} assigned to layers {layer_of[name]} and {index}"
                    )
                layer_of[name] = index
        layer_names = {}
        if names:
            layer_names = {i: n for i, n in enumerate(names, start=1) if n}
        return cls(max(len(layers), 1), layer_of, layer_names)


@dataclass(frozen=True)
class SccDecomposition:
    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]
    component_edges: tuple[tuple[int, ...], ...]

    def nontrivial(self) -> list[int]:
        """Indices of components with at least two nodes."""
        return [i for i, c in enumerate(self.components) if len(c) >= 2]

    def same_component(self, u: int, v: int) -> bool:
        return self.component_of[u] == self.component_of[v]


@dataclass(frozen=True)
class CycleEnumeration:
    cycles: tuple[tuple[int, ...], ...]
    truncated: bool


class LayeredGraph:
    """Immutable directed multigraph of program elements with a layer map."""

    __slots__ = (
        "elements",
        "edges",
        "layers",
        "_index",
        "_layer",
        "_in",
        "_out",
        "_succ",
    )

    def __init__(
        self,
        elements: Sequence[ProgramElement],
        edges: Sequence[DependencyEdge],
        layers: LayerAssignment,
    ) -> None:
        elements = tuple(elements)
        edges = tuple(edges)
        if not elements:
            raise GraphError("a layered graph needs at least one element")
        index: dict[str, int] = {}
        for i, el in enumerate(elements):
            if el.id != i:
                raise GraphError(f"element ids must be contiguous from 0; got {el.id} at {i}")
            if not el.name:
                raise GraphError(f"element {i} has an empty name")
            if el.name in index:
                raise GraphError(f"duplicate element name {el.name!r}")
            index[el.name] = i
        n = len(elements)
        for j, e in enumerate(edges):
            if e.id != j:
                raise GraphError(f"edge ids must be contiguous from 0; got {e.id} at {j}")
            if not (0 <= e.src < n and 0 <= e.dst < n):
                raise GraphError(f"edge {j} references a missing element")
            if e.src == e.dst:
                raise GraphError(f"edge {j} is a self-loop on {elements[e.src].name!r}")
        missing = [el.name for el in elements if el.name not in layers.layer_of]
        if missing:
            raise AssignmentError(f"elements without a layer: {', '.join(missing)}")
        unknown = [name for name in layers.layer_of if name not in index]
        if unknown:
            raise AssignmentError(f"layer assignment names unknown elements: {', '.join(unknown)}")

        indeg = [0] * n
        outdeg = [0] * n
        succ: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            outdeg[e.src] += 1
            indeg[e.dst] += 1
            succ[e.src].append(e.dst)

        self.elements = elements
        self.edges = edges
        self.layers = layers
        self._index = index
        self._layer = tuple(layers.layer_of[el.name] for el in elements)
        self._in = tuple(indeg)
        self._out = tuple(outdeg)
        self._succ = tuple(tuple(sorted(set(s))) for s in succ)

    @classmethod
    def build(
        cls,
        names: Sequence[str],
        edges: Iterable[tuple[str, str]],
        layers: LayerAssignment | Mapping[str, int],
        *,
        dedupe: bool = False,
        metadata: Mapping[str, Mapping[str, str]] | None = None,
    ) -> "LayeredGraph":
        """Construct from names and name pairs.

        Self-loops are dropped with a warning.  With ``dedupe`` parallel
        edges collapse to the first occurrence.
        """
        if not isinstance(layers, LayerAssignment):
            layers = LayerAssignment(max(layers.values(), default=1), dict(layers))
        metadata = metadata or {}
        elements = [
            ProgramElement(i, name, dict(metadata.get(name, {}))) for i, name in enumerate(names)
        ]
        index = {el.name: el.id for el in elements}
        kept: list[DependencyEdge] = []
        loops: list[str] = []
        seen: set[tuple[int, int]] = set()
        for src, dst in edges:
            if src not in index or dst not in index:
                missing = src if src not in index else dst
                raise GraphError(f"edge {src!r} -> {dst!r} references unknown element {missing!r}")
            if src == dst:
                loops.append(src)
                continue
            pair = (index[src], index[dst])
            if dedupe and pair in seen:
                continue
            seen.add(pair)
            kept.append(DependencyEdge(len(kept), *pair))
        if loops:
            log.warning("dropped %d self-loop(s): %s", len(loops), ", ".join(loops))
        return cls(elements, kept, layers)

    # ---- lookups ---------------------------------------------------------

    @property
    def layer_count(self) -> int:
        return self.layers.layer_count

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return (
            f"LayeredGraph({len(self.elements)} elements, {len(self.edges)} edges, "
            f"{self.layer_count} layers)"
        )

    def node_id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def name(self, p: int) -> str:
        return self.elements[p].name

    def edge(self, e: int) -> DependencyEdge:
        if not 0 <= e < len(self.edges):
            raise KeyError(f"unknown edge id {e}")
        return self.edges[e]

    def edge_src(self, e: int) -> int:
        return self.edge(e).src

    def edge_dst(self, e: int) -> int:
        return self.edge(e).dst

    def find_edges(self, src: str, dst: str) -> list[int]:
        s, d = self.node_id(src), self.node_id(dst)
        return [e.id for e in self.edges if e.src == s and e.dst == d]

    def layer_of(self, p: int) -> int:
        if not 0 <= p < len(self.elements):
            raise KeyError(f"unknown element id {p}")
        return self._layer[p]

    def layer_members(self, layer: int) -> list[int]:
        self._check_layer(layer)
        return [p for p, l in enumerate(self._layer) if l == layer]

    def successors(self, p: int) -> tuple[int, ...]:
        """Distinct successors of ``p`` in ascending id order."""
        return self._succ[p]

    def _check_layer(self, layer: int) -> None:
        if not 1 <= layer <= self.layer_count:
            raise AssignmentError(f"layer {layer} outside 1..{self.layer_count}")

    # ---- degrees ---------------------------------------------------------

    def node_degrees(self, p: int) -> tuple[int, int, int]:
        """``(in_deg, out_deg, deg)`` counting parallel edges separately."""
        if not 0 <= p < len(self.elements):
            raise KeyError(f"unknown element id {p}")
        return self._in[p], self._out[p], self._in[p] + self._out[p]

    def layer_degrees(self, layer: int) -> tuple[int, int, int, int]:
        """``(in_deg, out_deg, deg, intra_count)`` for one layer.

        Intra-layer edges count on both the in and the out side, so
        ``deg = external_in + external_out + 2 * intra_count``.
        """
        self._check_layer(layer)
        indeg = outdeg = intra = 0
        for e in self.edges:
            ls, ld = self._layer[e.src], self._layer[e.dst]
            if ls == layer:
                outdeg += 1
            if ld == layer:
                indeg += 1
            if ls == layer and ld == layer:
                intra += 1
        return indeg, outdeg, indeg + outdeg, intra


def scc_decompose(g: LayeredGraph) -> SccDecomposition:
    """Strongly connected components (iterative Tarjan).

    Components are ordered by their smallest node id and list their
    members in ascending order.
    """
    n = len(g.elements)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    raw: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = g.successors(v)
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                raw.append(sorted(comp))

    raw.sort(key=lambda c: c[0])
    component_of = [0] * n
    for ci, comp in enumerate(raw):
        for v in comp:
            component_of[v] = ci
    comp_edges: list[list[int]] = [[] for _ in raw]
    for e in g.edges:
        c = component_of[e.src]
        if c == component_of[e.dst]:
            comp_edges[c].append(e.id)
    return SccDecomposition(
        tuple(tuple(c) for c in raw),
        tuple(component_of),
        tuple(tuple(es) for es in comp_edges),
    )


def enumerate_simple_cycles(g: LayeredGraph, limit: int = DEFAULT_CYCLE_LIMIT) -> CycleEnumeration:
    """Elementary cycles as node-id sequences, rotated to start at their
    smallest id and listed in lexicographic order.

    Parallel edges do not produce duplicate cycles.  At most ``limit``
    cycles are returned; ``truncated`` says whether more exist.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    n = len(g.elements)
    found: list[tuple[int, ...]] = []

    for start in range(n):
        # restrict the search to nodes > start that can both reach and be
        # reached from start inside the induced subgraph
        allowed = _reach(g, start, forward=True) & _reach(g, start, forward=False)
        if len(allowed) < 2:
            continue
        path = [start]
        on_path = {start}
        frames = [iter(w for w in g.successors(start) if w in allowed)]
        while frames:
            w = next(frames[-1], None)
            if w is None:
                frames.pop()
                on_path.discard(path.pop())
                continue
            if w == start:
                if len(found) == limit:
                    return CycleEnumeration(tuple(found), True)
                found.append(tuple(path))
            elif w not in on_path:
                path.append(w)
                on_path.add(w)
                frames.append(iter(x for x in g.successors(w) if x in allowed))
    return CycleEnumeration(tuple(found), False)


def _reach(g: LayeredGraph, start: int, *, forward: bool) -> set[int]:
    """Nodes >= start reachable from (or reaching) start through nodes >= start."""
    if forward:
        adj = g.successors
    else:
        pred: list[list[int]] = [[] for _ in g.elements]
        for v in range(start, len(g.elements)):
            for w in g.successors(v):
                pred[w].append(v)
        adj = pred.__getitem__
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj(v):
            if w >= start and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen
