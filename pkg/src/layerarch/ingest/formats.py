"""Graph and layer interchange formats: JSON, CSV edge lists, a DOT subset.

Every parser returns a :class:`GraphDocument` in declaration order.  Errors
are raised as subclasses of :class:`IngestError` carrying a line/column
where one can be determined.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Sequence

from ..graph import LayerAssignment, LayeredGraph

log = logging.getLogger(__name__)

TOP_FIRST = "top-first"
BOTTOM_FIRST = "bottom-first"
DIRECTIONS = (TOP_FIRST, BOTTOM_FIRST)


class IngestError(ValueError):
    """Base class for input diagnostics."""

    kind = "input error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.kind}: {self.message}"


class MalformedInputError(IngestError):
    kind = "syntax error"


class SchemaError(IngestError):
    kind = "schema error"


class DuplicateNodeError(IngestError):
    kind = "duplicate node"


class DanglingEndpointError(IngestError):
    kind = "dangling endpoint"

    def __init__(self, node: str, **kw: Any):
        self.node = node
        super().__init__(f"edge endpoint {node!r} is not a declared node", **kw)


class UnknownDirectionError(IngestError):
    kind = "unknown direction"


class ColumnCountError(IngestError):
    kind = "column count"


class EmptyIdError(IngestError):
    kind = "empty id"


class UnsupportedConstructError(IngestError):
    kind = "unsupported construct"


class DuplicateAssignmentError(IngestError):
    kind = "duplicate assignment"


class UnboundElementError(IngestError):
    kind = "unbound element"


@dataclass
class NodeDecl:
    id: str
    attrs: dict[str, str] = field(default_factory=dict)


@dataclass
class LayersDocument:
    """Layer member lists, always stored top layer first."""

    layers: list[list[str]]
    names: list[str | None] = field(default_factory=list)

    def to_assignment(self) -> LayerAssignment:
        return LayerAssignment.from_lists(self.layers, self.names)


@dataclass
class GraphDocument:
    nodes: list[NodeDecl] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)
    layers: LayersDocument | None = None

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def to_layered_graph(
        self, layers: LayerAssignment | LayersDocument | None = None, *, dedupe: bool = False
    ) -> LayeredGraph:
        """Bind a layer assignment (argument or embedded) and build the graph."""
        if layers is None:
            layers = self.layers
        if layers is None:
            raise SchemaError("no layer assignment given and none embedded in the graph")
        if isinstance(layers, LayersDocument):
            layers = layers.to_assignment()
        declared = set(self.node_ids)
        unknown = [name for name in layers.layer_of if name not in declared]
        if unknown:
            raise UnboundElementError(f"layer members not in graph: {', '.join(unknown)}")
        missing = [name for name in self.node_ids if name not in layers.layer_of]
        if missing:
            raise UnboundElementError(f"graph nodes without a layer: {', '.join(missing)}")
        return LayeredGraph.build(
            self.node_ids,
            self.edges,
            layers,
            dedupe=dedupe,
            metadata={n.id: n.attrs for n in self.nodes if n.attrs},
        )


def _declare(nodes: list[NodeDecl], seen: set[str], name: str) -> None:
    if name not in seen:
        seen.add(name)
        nodes.append(NodeDecl(name))


def _line_of(text: str, pattern: str, occurrence: int = 0) -> int | None:
    """1-based line of the ``occurrence``-th match of ``pattern``, if any."""
    matches = list(re.finditer(pattern, text))
    try:
        m = matches[occurrence]
    except IndexError:
        return None
    return text.count("\n", 0, m.start()) + 1


# ---- JSON ----------------------------------------------------------------


def _load_json(text: str, source: str | None) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(exc.msg, exc.lineno, exc.colno, source) from None


def _string(value: Any, what: str, source: str | None) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{what} must be a string, got {type(value).__name__}", source=source)
    if not value:
        raise EmptyIdError(f"{what} is empty", source=source)
    return value


def parse_json_graph(text: str, *, auto_declare: bool = False, source: str | None = None) -> GraphDocument:
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object", 1, 1, source)
    nodes_raw = data.get("nodes", [])
    edges_raw = data.get("edges", [])
    if not isinstance(nodes_raw, list) or not isinstance(edges_raw, list):
        raise SchemaError('"nodes" and "edges" must be arrays', source=source)

    nodes: list[NodeDecl] = []
    seen: set[str] = set()
    for i, raw in enumerate(nodes_raw):
        if not isinstance(raw, dict) or "id" not in raw:
            raise SchemaError(f'nodes[{i}] must be an object with an "id"', source=source)
        node_id = _string(raw["id"], f"nodes[{i}].id", source)
        if node_id in seen:
            line = _line_of(text, rf'"id"\s*:\s*{re.escape(json.dumps(node_id))}', 1)
            raise DuplicateNodeError(f"node id {node_id!r} declared twice (nodes[{i}])", line, source=source)
        attrs = raw.get("attrs", {})
        if not isinstance(attrs, dict) or not all(isinstance(v, str) for v in attrs.values()):
            raise SchemaError(f"nodes[{i}].attrs must map strings to strings", source=source)
        seen.add(node_id)
        nodes.append(NodeDecl(node_id, dict(attrs)))

    edges: list[tuple[str, str]] = []
    for i, raw in enumerate(edges_raw):
        if not isinstance(raw, dict) or "src" not in raw or "dst" not in raw:
            raise SchemaError(f'edges[{i}] must be an object with "src" and "dst"', source=source)
        src = _string(raw["src"], f"edges[{i}].src", source)
        dst = _string(raw["dst"], f"edges[{i}].dst", source)
        for end in (src, dst):
            if end not in seen:
                if not auto_declare:
                    line = _line_of(text, rf'"(?:src|dst)"\s*:\s*{re.escape(json.dumps(end))}')
                    raise DanglingEndpointError(end, line=line, source=source)
                _declare(nodes, seen, end)
        edges.append((src, dst))

    layers = None
    if data.get("layers") is not None:
        layers = _layers_from_obj(data["layers"], text, source)
    return GraphDocument(nodes, edges, layers)


def _layers_from_obj(obj: Any, text: str, source: str | None) -> LayersDocument:
    if not isinstance(obj, dict):
        raise SchemaError('"layers" must be an object', source=source)
    direction = obj.get("direction", TOP_FIRST)
    if direction not in DIRECTIONS:
        line = _line_of(text, r'"direction"')
        raise UnknownDirectionError(
            f"direction {direction!r} is not one of {', '.join(DIRECTIONS)}", line, source=source
        )
    raw_layers = obj.get("layers")
    if not isinstance(raw_layers, list):
        raise SchemaError('"layers.layers" must be an array', source=source)
    members: list[list[str]] = []
    names: list[str | None] = []
    owner: dict[str, int] = {}
    for i, raw in enumerate(raw_layers):
        if isinstance(raw, list):
            raw = {"members": raw}
        if not isinstance(raw, dict) or not isinstance(raw.get("members"), list):
            raise SchemaError(f'layers[{i}] must be an object with a "members" array', source=source)
        layer: list[str] = []
        for m in raw["members"]:
            if isinstance(m, int) and not isinstance(m, bool):
                m = str(m)
            name = _string(m, f"layers[{i}] member", source)
            if name in owner:
                line = _line_of(text, re.escape(json.dumps(name)), -1)
                raise DuplicateAssignmentError(
                    f"element {name!r} listed in layers[{owner[name]}] and layers[{i}]", line, source=source
                )
            owner[name] = i
            layer.append(name)
        if not layer:
            log.warning("layer %d is empty", i)
        members.append(layer)
        names.append(raw.get("name"))
    if not members:
        raise SchemaError("layer assignment declares no layers", source=source)
    if direction == BOTTOM_FIRST:
        members.reverse()
        names.reverse()
    return LayersDocument(members, names)


def parse_layer_assignment(text: str, *, source: str | None = None) -> LayersDocument:
    """Parse the layers JSON schema; the result is normalized to top-first."""
    return _layers_from_obj(_load_json(text, source), text, source)


def layers_to_obj(layers: LayersDocument | LayerAssignment) -> dict[str, Any]:
    if isinstance(layers, LayerAssignment):
        lists = layers.as_lists()
        names = [layers.layer_names.get(i) for i in range(1, layers.layer_count + 1)]
    else:
        lists, names = layers.layers, layers.names
    out = []
    for i, members in enumerate(lists):
        entry: dict[str, Any] = {}
        if i < len(names) and names[i]:
            entry["name"] = names[i]
        entry["members"] = list(members)
        out.append(entry)
    return {"direction": TOP_FIRST, "layers": out}


def emit_json_graph(doc: GraphDocument) -> str:
    obj: dict[str, Any] = {
        "nodes": [{"id": n.id, **({"attrs": dict(n.attrs)} if n.attrs else {})} for n in doc.nodes],
        "edges": [{"src": s, "dst": d} for s, d in doc.edges],
    }
    if doc.layers is not None:
        obj["layers"] = layers_to_obj(doc.layers)
    return json.dumps(obj, indent=2) + "\n"


def emit_layers(layers: LayersDocument | LayerAssignment) -> str:
    return json.dumps(layers_to_obj(layers), indent=2) + "\n"


# ---- CSV -----------------------------------------------------------------


def parse_csv_edges(text: str, *, source: str | None = None) -> GraphDocument:
    """``src,dst`` lines; optional ``src,dst`` header; ``#`` comments."""
    nodes: list[NodeDecl] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []
    first = True
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if first and [c.lower() for c in cells] == ["src", "dst"]:
            first = False
            continue
        first = False
        if len(cells) != 2:
            raise ColumnCountError(f"expected 2 columns, got {len(cells)}", lineno, source=source)
        if not cells[0] or not cells[1]:
            raise EmptyIdError("empty node id", lineno, source=source)
        for c in cells:
            _declare(nodes, seen, c)
        edges.append((cells[0], cells[1]))
    return GraphDocument(nodes, edges)


def emit_csv_edges(doc: GraphDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["src", "dst"])
    writer.writerows(doc.edges)
    return buf.getvalue()


# ---- DOT subset ----------------------------------------------------------

_DOT_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<arrow>->)
  | (?P<undirected>--)
  | (?P<ident>[A-Za-z0-9_.]+)
  | (?P<punct>[{}\[\];,=:])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _dot_tokens(text: str, source: str | None) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if m is None:
            raise MalformedInputError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source
            )
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "quoted":
                value = value[1:-1].replace('\\"', '"')
            toks.append(_Tok(kind, value, line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rfind("\n") + 1
        pos = m.end()
    return toks


def parse_dot_subset(text: str, *, source: str | None = None) -> GraphDocument:
    """Parse ``digraph NAME { a -> b; ... }``.

    Edge chains and node statements are accepted; attribute lists and
    graph-level attribute statements are ignored with a warning.  Undirected
    graphs and subgraphs are rejected.
    """
    toks = _dot_tokens(text, source)
    pos = 0

    def peek(offset: int = 0) -> _Tok | None:
        return toks[pos + offset] if pos + offset < len(toks) else None

    def fail(cls: type[IngestError], msg: str, tok: _Tok | None) -> IngestError:
        if tok is None:
            return cls(msg + " (at end of input)", source=source)
        return cls(msg, tok.line, tok.col, source)

    def expect(text_: str) -> _Tok:
        nonlocal pos
        tok = peek()
        if tok is None or tok.text != text_ or tok.kind == "quoted":
            raise fail(MalformedInputError, f"expected {text_!r}", tok)
        pos += 1
        return tok

    tok = peek()
    if tok is not None and tok.kind == "ident" and tok.text.lower() == "strict":
        raise fail(UnsupportedConstructError, "strict graphs are not supported", tok)
    if tok is not None and tok.kind == "ident" and tok.text.lower() == "graph":
        raise fail(UnsupportedConstructError, "undirected graphs are not supported", tok)
    if tok is None or tok.kind != "ident" or tok.text.lower() != "digraph":
        raise fail(MalformedInputError, "expected 'digraph'", tok)
    pos += 1
    tok = peek()
    if tok is not None and tok.kind in ("ident", "quoted"):
        pos += 1
    expect("{")

    nodes: list[NodeDecl] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []
    ignored = 0

    def node_id() -> str:
        nonlocal pos
        tok = peek()
        if tok is None or tok.kind not in ("ident", "quoted"):
            raise fail(MalformedInputError, "expected a node id", tok)
        if tok.kind == "ident" and tok.text.lower() in ("subgraph", "graph", "digraph"):
            raise fail(UnsupportedConstructError, f"{tok.text!r} statements are not supported", tok)
        if not tok.text:
            raise fail(EmptyIdError, "empty node id", tok)
        pos += 1
        return tok.text

    def skip_attrs() -> None:
        nonlocal pos, ignored
        while peek() is not None and peek().text == "[" and peek().kind == "punct":
            depth_tok = peek()
            pos += 1
            while True:
                tok = peek()
                if tok is None:
                    raise fail(MalformedInputError, "unterminated attribute list", depth_tok)
                pos += 1
                if tok.kind == "punct" and tok.text == "]":
                    break
            ignored += 1

    while True:
        tok = peek()
        if tok is None:
            raise fail(MalformedInputError, "missing closing '}'", None)
        if tok.kind == "punct" and tok.text == "}":
            pos += 1
            break
        if tok.kind == "punct" and tok.text == ";":
            pos += 1
            continue
        if tok.kind == "punct" and tok.text == "{":
            raise fail(UnsupportedConstructError, "anonymous subgraphs are not supported", tok)
        if tok.kind == "ident" and tok.text.lower() == "subgraph":
            raise fail(UnsupportedConstructError, "subgraphs are not supported", tok)
        if tok.kind == "ident" and tok.text.lower() in ("graph", "node", "edge"):
            nxt = peek(1)
            if nxt is not None and nxt.kind == "punct" and nxt.text == "[":
                pos += 1
                skip_attrs()
                continue
        nxt = peek(1)
        if nxt is not None and nxt.kind == "punct" and nxt.text == "=":
            # graph-level attribute: ID = ID
            pos += 2
            node_id()
            ignored += 1
            continue
        chain = [node_id()]
        while True:
            op = peek()
            if op is not None and op.kind == "undirected":
                raise fail(UnsupportedConstructError, "undirected edges ('--') are not supported", op)
            if op is None or op.kind != "arrow":
                break
            pos += 1
            if peek() is not None and peek().kind == "punct" and peek().text == "{":
                raise fail(UnsupportedConstructError, "subgraph edge targets are not supported", peek())
            chain.append(node_id())
        skip_attrs()
        for name in chain:
            _declare(nodes, seen, name)
        edges.extend(zip(chain, chain[1:]))

    if peek() is not None:
        raise fail(MalformedInputError, "trailing content after graph body", peek())
    if ignored:
        log.warning("ignored %d DOT attribute statement(s)", ignored)
    return GraphDocument(nodes, edges)


def _dot_quote(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def emit_dot(doc: GraphDocument, name: str = "deps") -> str:
    lines = [f"digraph {name} {{"]
    for node in doc.nodes:
        # declare every node so isolated ones and declaration order survive
        lines.append(f"  {_dot_quote(node.id)};")
    for src, dst in doc.edges:
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


FORMATS = ("json", "csv", "dot")


def parse_graph(text: str, fmt: str, *, source: str | None = None) -> GraphDocument:
    if fmt == "json":
        return parse_json_graph(text, source=source)
    if fmt == "csv":
        return parse_csv_edges(text, source=source)
    if fmt == "dot":
        return parse_dot_subset(text, source=source)
    raise ValueError(f"unknown graph format {fmt!r}; expected one of {', '.join(FORMATS)}")


def document_from_graph(g: LayeredGraph, *, with_layers: bool = True) -> GraphDocument:
    nodes = [NodeDecl(el.name, dict(el.metadata)) for el in g.elements]
    edges = [(g.name(e.src), g.name(e.dst)) for e in g.edges]
    layers = None
    if with_layers:
        names = [g.layers.layer_names.get(i) for i in range(1, g.layer_count + 1)]
        lists: Sequence[Sequence[str]] = [[g.name(p) for p in g.layer_members(l)] for l in range(1, g.layer_count + 1)]
        layers = LayersDocument([list(x) for x in lists], names)
    return GraphDocument(nodes, edges, layers)
