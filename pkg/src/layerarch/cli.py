"""Command-line front end.

Exit codes: 0 = layering gate passed, 1 = gate failed, 2 = input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .graph import GraphError, LayerAssignment, LayeredGraph
from .ingest import (
    FORMATS,
    GraphDocument,
    IngestError,
    emit_json_graph,
    emit_layers,
    extract_java_package_deps,
    parse_graph,
    parse_layer_assignment,
)
from .ingest.formats import document_from_graph
from .metrics import DEFAULT_PENALTY_SWEEP, PenaltyConfig, Style, StyleThresholds, analyze
from .netgen import GenSpec, generate
from .recovery import RecoveryError, recover_layers
from .report import render_json, render_text
from .samples import SAMPLE_NETWORK2, sample_network2_text

log = logging.getLogger("layerarch")

EXIT_OK, EXIT_GATE, EXIT_INPUT = 0, 1, 2

_GATES = {
    "non-layered": {Style.NON_LAYERED},
    "open": {Style.NON_LAYERED, Style.OPEN},
    "never": set(),
}


class InputError(Exception):
    """Reported on stderr with exit code 2."""


@dataclass
class AnalysisConfig:
    graph_path: str
    graph_format: str
    layers_path: str | None = None
    recover: bool = False
    granularity: int | None = None
    layer_count: int | None = None
    strip_prefix: bool = False
    penalties: list[PenaltyConfig] = field(default_factory=list)
    thresholds: StyleThresholds = field(default_factory=StyleThresholds)
    output: str = "text"
    precision: int = 2
    dedupe: bool = False
    fail_on: str = "non-layered"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _infer_format(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    return {"csv": "csv", "dot": "dot", "gv": "dot"}.get(suffix, "json")


def load_document(path: str, fmt: str) -> GraphDocument:
    if path == "sample":
        return parse_graph(sample_network2_text(), "json", source=SAMPLE_NETWORK2)
    return parse_graph(_read(path), fmt, source=path)


def _placeholder_graph(doc: GraphDocument, dedupe: bool) -> LayeredGraph:
    if not doc.nodes:
        raise InputError("graph has no nodes")
    return LayeredGraph.build(doc.node_ids, doc.edges, {n: 1 for n in doc.node_ids}, dedupe=dedupe)


def resolve_penalties(alphas: Sequence[float] | None, betas: Sequence[float] | None) -> list[PenaltyConfig]:
    alphas, betas = alphas or [], betas or []
    if len(alphas) != len(betas):
        raise InputError("--alpha and --beta must be given the same number of times")
    pairs = list(zip(alphas, betas)) or list(DEFAULT_PENALTY_SWEEP)
    try:
        return [PenaltyConfig(a, b) for a, b in pairs]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def build_graph(cfg: AnalysisConfig) -> LayeredGraph:
    doc = load_document(cfg.graph_path, cfg.graph_format)
    if cfg.recover and cfg.layers_path:
        raise InputError("give either --layers or --recover, not both")
    if cfg.recover:
        if cfg.granularity is None or cfg.layer_count is None:
            raise InputError("--recover needs --granularity and --layer-count")
        g0 = _placeholder_graph(doc, cfg.dedupe)
        layers: LayerAssignment = recover_layers(
            g0, cfg.granularity, cfg.layer_count, strip_common_prefix=cfg.strip_prefix
        )
        return LayeredGraph(g0.elements, g0.edges, layers)
    if cfg.layers_path:
        return doc.to_layered_graph(
            parse_layer_assignment(_read(cfg.layers_path), source=cfg.layers_path), dedupe=cfg.dedupe
        )
    if doc.layers is None:
        raise InputError("no layer assignment: pass --layers PATH, --recover, or embed \"layers\" in the graph JSON")
    return doc.to_layered_graph(dedupe=cfg.dedupe)


def cmd_analyze(cfg: AnalysisConfig) -> tuple[str, int]:
    g = build_graph(cfg)
    report = analyze(g, cfg.penalties or DEFAULT_PENALTY_SWEEP, cfg.thresholds)
    text = render_json(report) if cfg.output == "json" else render_text(report, cfg.precision)
    code = EXIT_GATE if report.style in _GATES[cfg.fail_on] else EXIT_OK
    return text, code


def cmd_extract(source_root: str, dedupe: bool = False) -> tuple[str, str]:
    root = Path(source_root)
    if not root.is_dir():
        raise InputError(f"{source_root} is not a directory")
    result = extract_java_package_deps(root, dedupe=dedupe)
    doc = result.document
    summary = (
        f"{result.files_scanned} file(s) scanned, {len(doc.nodes)} package(s), {len(doc.edges)} edge(s), "
        f"{result.external_imports} external import(s) dropped, {len(result.skipped_files)} file(s) skipped"
    )
    if not doc.nodes:
        summary += "\nwarning: no Java packages found; wrote an empty graph"
    return emit_json_graph(doc), summary


def cmd_recover(
    graph_path: str, fmt: str, granularity: int, layer_count: int, *, strip_prefix: bool = False, dedupe: bool = False
) -> str:
    g0 = _placeholder_graph(load_document(graph_path, fmt), dedupe)
    return emit_layers(recover_layers(g0, granularity, layer_count, strip_common_prefix=strip_prefix))


def cmd_gen(spec: GenSpec) -> str:
    return emit_json_graph(document_from_graph(generate(spec)))


# ---- argument parsing ----------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layerarch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compute layering metrics for a dependency graph")
    a.add_argument("--graph", required=True, help="graph file, or 'sample' for the bundled example")
    a.add_argument("--format", choices=FORMATS, help="graph format (default: from file suffix)")
    a.add_argument("--layers", help="layers JSON file")
    a.add_argument("--recover", action="store_true", help="recover layers from package names")
    a.add_argument("--granularity", type=int)
    a.add_argument("--layer-count", type=int)
    a.add_argument("--strip-prefix", action="store_true", help="drop the root namespace shared by all names")
    a.add_argument("--alpha", type=float, action="append", help="back-call penalty (repeat with --beta)")
    a.add_argument("--beta", type=float, action="append", help="skip-call penalty (repeat with --alpha)")
    a.add_argument("--tau-back", type=float, default=0.0)
    a.add_argument("--tau-skip", type=float, default=0.0)
    a.add_argument("--out", choices=("text", "json"), default="text")
    a.add_argument("--precision", type=int, default=2)
    a.add_argument("--dedupe", action="store_true", help="collapse parallel edges")
    a.add_argument("--fail-on", choices=tuple(_GATES), default="non-layered")

    e = sub.add_parser("extract", help="extract a package graph from Java sources")
    e.add_argument("source_root")
    e.add_argument("-o", "--output", help="graph JSON path (default: stdout)")
    e.add_argument("--dedupe", action="store_true")

    r = sub.add_parser("recover", help="recover a layer assignment from package names")
    r.add_argument("--graph", required=True)
    r.add_argument("--format", choices=FORMATS)
    r.add_argument("--granularity", type=int, required=True)
    r.add_argument("--layer-count", type=int, required=True)
    r.add_argument("--strip-prefix", action="store_true")
    r.add_argument("--dedupe", action="store_true")
    r.add_argument("-o", "--output")

    gen = sub.add_parser("gen", help="generate a synthetic layered network")
    gen.add_argument("--nodes", type=_int_list, required=True, help="nodes per layer, top first, e.g. 3,3,4")
    gen.add_argument("--p-down", type=float, default=0.3, help="adjacent downward arc probability")
    gen.add_argument("--p-intra", type=float, default=0.1)
    gen.add_argument("--p-back", type=float, default=0.0)
    gen.add_argument("--p-skip", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output")

    sub.add_parser("version", help="print the version")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "version":
            print(f"layerarch {__version__}")
            return EXIT_OK
        if args.command == "analyze":
            try:
                thresholds = StyleThresholds(args.tau_back, args.tau_skip)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            cfg = AnalysisConfig(
                graph_path=args.graph,
                graph_format=_infer_format(args.graph, args.format),
                layers_path=args.layers,
                recover=args.recover,
                granularity=args.granularity,
                layer_count=args.layer_count,
                strip_prefix=args.strip_prefix,
                penalties=resolve_penalties(args.alpha, args.beta),
                thresholds=thresholds,
                output=args.out,
                precision=args.precision,
                dedupe=args.dedupe,
                fail_on=args.fail_on,
            )
            text, code = cmd_analyze(cfg)
            sys.stdout.write(text)
            return code
        if args.command == "extract":
            text, summary = cmd_extract(args.source_root, args.dedupe)
            _write(args.output, text)
            print(summary, file=sys.stderr)
            return EXIT_OK
        if args.command == "recover":
            text = cmd_recover(
                args.graph, _infer_format(args.graph, args.format), args.granularity, args.layer_count,
                strip_prefix=args.strip_prefix, dedupe=args.dedupe,
            )
            _write(args.output, text)
            return EXIT_OK
        if args.command == "gen":
            try:
                spec = GenSpec(len(args.nodes), args.nodes, args.p_down, args.p_intra, args.p_back, args.p_skip, args.seed)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            _write(args.output, cmd_gen(spec))
            return EXIT_OK
    except (InputError, IngestError, GraphError, RecoveryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT
