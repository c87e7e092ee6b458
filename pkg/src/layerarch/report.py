"""Serialization and text rendering of :class:`MetricsReport`."""

from __future__ import annotations

import json
from typing import Any

from .metrics import (
    AsvEntry,
    BaselineReport,
    ComponentViolation,
    Counts,
    EdgeClass,
    EdgeRow,
    LayerRow,
    MetricsReport,
    NodeRow,
    Ratio,
    Style,
    StyleThresholds,
    SystemRow,
)

SCHEMA_VERSION = 1

_NODE_RATIOS = ("bvm_caller", "bvm_called", "bvm", "svm_caller", "svm_called", "svm", "av")
_LAYER_RATIOS = ("bvc", "bvr", "bvl", "svc", "svr", "svl", "av", "ls")


class ReportFormatError(ValueError):
    pass


def _ratio(r: Ratio) -> dict[str, Any]:
    return {"num": r.num, "den": r.den, "value": r.value, "degenerate": r.degenerate}


def _unratio(d: dict[str, Any]) -> Ratio:
    return Ratio(d["num"], d["den"])


def _component(c: ComponentViolation) -> dict[str, Any]:
    return {"nodes": list(c.nodes), "ratio": _ratio(c.cv)}


def _uncomponent(d: dict[str, Any]) -> ComponentViolation:
    return ComponentViolation(tuple(d["nodes"]), _unratio(d["ratio"]))


def _counts(c: Counts) -> dict[str, int]:
    return {"bcc": c.bcc, "bcr": c.bcr, "scc": c.scc, "scr": c.scr}


def report_to_dict(r: MetricsReport) -> dict[str, Any]:
    s, b = r.system, r.baseline
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": list(r.nodes),
        "edges": [
            {
                "id": e.id,
                "src": e.src,
                "dst": e.dst,
                "src_layer": e.src_layer,
                "dst_layer": e.dst_layer,
                "class": e.cls.value,
                "on_cycle": e.on_cycle,
            }
            for e in r.edges
        ],
        "node_table": [
            {
                "name": n.name,
                "layer": n.layer,
                "in_deg": n.in_deg,
                "out_deg": n.out_deg,
                "deg": n.deg,
                **_counts(n.counts),
                **{f: _ratio(getattr(n, f)) for f in _NODE_RATIOS},
            }
            for n in r.node_table
        ],
        "layer_table": [
            {
                "index": l.index,
                "name": l.name,
                "size": l.size,
                "in_deg": l.in_deg,
                "out_deg": l.out_deg,
                "deg": l.deg,
                "intra": l.intra,
                **_counts(l.counts),
                **{f: _ratio(getattr(l, f)) for f in _LAYER_RATIOS},
                "lsi": l.lsi,
            }
            for l in r.layer_table
        ],
        "system": {
            "edges": s.edges,
            "bv": list(s.bv),
            "sv": list(s.sv),
            "cb": list(s.cb),
            "cs": list(s.cs),
            "bvs": _ratio(s.bvs),
            "svs": _ratio(s.svs),
            "bvs_conformance": s.bvs_conformance,
            "svs_conformance": s.svs_conformance,
            "asv": [{"alpha": a.alpha, "beta": a.beta, "ratio": _ratio(a.asv)} for a in s.asv],
            "cv": s.cv_system,
            "cv_components": [_component(c) for c in s.cv],
            "lsi": list(r.lsi),
        },
        "baseline": {
            "reconstructed": b.reconstructed,
            "back": list(b.back),
            "l_back": list(b.l_back),
            "bcvi": [_ratio(x) for x in b.bcvi],
            "bcvi_system": b.bcvi_system,
            "skip": list(b.skip),
            "l_skip": list(b.l_skip),
            "scvi": [_ratio(x) for x in b.scvi],
            "scvi_system": b.scvi_system,
            "dcvi": [_component(c) for c in b.dcvi],
        },
        "style": r.style.value,
        "thresholds": {"tau_back": r.thresholds.tau_back, "tau_skip": r.thresholds.tau_skip},
        "degenerate": r.degenerate_cells(),
    }


def report_from_dict(d: dict[str, Any]) -> MetricsReport:
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ReportFormatError(f"unsupported report schema_version {version!r}")
    s, b = d["system"], d["baseline"]
    try:
        return MetricsReport(
            nodes=tuple(d["nodes"]),
            edges=tuple(
                EdgeRow(
                    e["id"], e["src"], e["dst"], e["src_layer"], e["dst_layer"],
                    EdgeClass(e["class"]), e["on_cycle"],
                )
                for e in d["edges"]
            ),
            node_table=tuple(
                NodeRow(
                    n["name"], n["layer"], n["in_deg"], n["out_deg"], n["deg"],
                    Counts(n["bcc"], n["bcr"], n["scc"], n["scr"]),
                    *(_unratio(n[f]) for f in _NODE_RATIOS),
                )
                for n in d["node_table"]
            ),
            layer_table=tuple(
                LayerRow(
                    l["index"], l["name"], l["size"], l["in_deg"], l["out_deg"], l["deg"], l["intra"],
                    Counts(l["bcc"], l["bcr"], l["scc"], l["scr"]),
                    *(_unratio(l[f]) for f in _LAYER_RATIOS),
                    l["lsi"],
                )
                for l in d["layer_table"]
            ),
            system=SystemRow(
                edges=s["edges"],
                bv=tuple(s["bv"]),
                sv=tuple(s["sv"]),
                cb=tuple(s["cb"]),
                cs=tuple(s["cs"]),
                bvs=_unratio(s["bvs"]),
                svs=_unratio(s["svs"]),
                bvs_conformance=s["bvs_conformance"],
                svs_conformance=s["svs_conformance"],
                asv=tuple(AsvEntry(a["alpha"], a["beta"], _unratio(a["ratio"])) for a in s["asv"]),
                cv=tuple(_uncomponent(c) for c in s["cv_components"]),
                cv_system=s["cv"],
            ),
            baseline=BaselineReport(
                back=tuple(b["back"]),
                l_back=tuple(b["l_back"]),
                bcvi=tuple(_unratio(x) for x in b["bcvi"]),
                bcvi_system=b["bcvi_system"],
                skip=tuple(b["skip"]),
                l_skip=tuple(b["l_skip"]),
                scvi=tuple(_unratio(x) for x in b["scvi"]),
                scvi_system=b["scvi_system"],
                dcvi=tuple(_uncomponent(c) for c in b["dcvi"]),
                reconstructed=b["reconstructed"],
            ),
            style=Style(d["style"]),
            thresholds=StyleThresholds(**d["thresholds"]),
        )
    except (KeyError, TypeError) as exc:
        raise ReportFormatError(f"malformed report: {exc}") from None


def render_json(r: MetricsReport) -> str:
    return json.dumps(report_to_dict(r), indent=2) + "\n"


def parse_json_report(text: str) -> MetricsReport:
    return report_from_dict(json.loads(text))


# ---- text ----------------------------------------------------------------


def _num(x: float, precision: int) -> str:
    return f"{x:.{precision}f}"


def _cell(r: Ratio, precision: int) -> str:
    return f"{r}={_num(r.value, precision)}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), "  ".join("-" * w for w in widths)]
    lines += [fmt.format(*row) for row in rows]
    return lines


def _names(r: MetricsReport, ids: tuple[int, ...]) -> str:
    return "{" + ",".join(r.nodes[i] for i in ids) + "}"


def _edge_names(r: MetricsReport, ids: tuple[int, ...]) -> str:
    return "{" + ",".join(f"{r.edges[i].src}-{r.edges[i].dst}" for i in ids) + "}"


def render_text(r: MetricsReport, precision: int = 2) -> str:
    """Plain-text tables; numbers are rounded to ``precision`` decimals."""
    p = precision
    out: list[str] = []

    out.append("Arc analysis")
    out += _table(
        ["No", "Arc", "Layer", "S(e)", "D(e)", "L_s", "L_d", "Remark"],
        [
            [str(e.id + 1), f"{e.src}-{e.dst}", f"{e.src_layer}-{e.dst_layer}", e.src, e.dst,
             str(e.src_layer), str(e.dst_layer), e.cls.value]
            for e in r.edges
        ],
    )

    out += ["", "Node level"]
    out += _table(
        ["Node", "Layer", "In", "Out", "Deg", "bcc", "bcr", "scc", "scr",
         "BVC", "BVR", "TBV", "SVC", "SVR", "TSV", "AV"],
        [
            [n.name, str(n.layer), str(n.in_deg), str(n.out_deg), str(n.deg),
             str(n.counts.bcc), str(n.counts.bcr), str(n.counts.scc), str(n.counts.scr)]
            + [_cell(getattr(n, f), p) for f in _NODE_RATIOS]
            for n in r.node_table
        ],
    )

    out += ["", "Layer level"]
    out += _table(
        ["Layer", "Size", "In", "Out", "Deg", "Intra", "bcc", "bcr", "scc", "scr",
         "BVC", "BVR", "BVL", "SVC", "SVR", "SVL", "AV"],
        [
            [str(l.index) + (f" ({l.name})" if l.name else ""), str(l.size), str(l.in_deg),
             str(l.out_deg), str(l.deg), str(l.intra), str(l.counts.bcc), str(l.counts.bcr),
             str(l.counts.scc), str(l.counts.scr)]
            + [_cell(getattr(l, f), p) for f in ("bvc", "bvr", "bvl", "svc", "svr", "svl", "av")]
            for l in r.layer_table
        ],
    )

    s, b = r.system, r.baseline
    out += ["", "Comparative analysis (module-based baseline vs relation-based)"]
    rows = [
        ["BACK", _names(r, b.back), "BV", _edge_names(r, s.bv)],
        ["L_BACK", "{" + ",".join(map(str, b.l_back)) + "}", "", ""],
    ]
    for l in r.layer_table:
        rows.append([f"BCVI({l.index})", _cell(b.bcvi[l.index - 1], p), f"BVL({l.index})", _cell(l.bvl, p)])
    rows.append(["BCVI(S)", _num(b.bcvi_system, p) + " *", "BVS(S)",
                 f"{_cell(s.bvs, p)} (1-BVS={_num(s.bvs_conformance, p)})"])
    rows.append(["SKIP", _names(r, b.skip), "SV", _edge_names(r, s.sv)])
    rows.append(["L_SKIP", "{" + ",".join(map(str, b.l_skip)) + "}", "", ""])
    for l in r.layer_table:
        rows.append([f"SCVI({l.index})", _cell(b.scvi[l.index - 1], p), f"SVL({l.index})", _cell(l.svl, p)])
    rows.append(["SCVI(S)", _num(b.scvi_system, p) + " *", "SVS(S)",
                 f"{_cell(s.svs, p)} (1-SVS={_num(s.svs_conformance, p)})"])
    if not b.dcvi:
        rows.append(["DCVI", "no cycles", "CV", "no cycles"])
    for i, (d, c) in enumerate(zip(b.dcvi, s.cv), start=1):
        rows.append([f"DCVI(c{i})", _cell(d.cv, p), f"CV(c{i})", _cell(c.cv, p)])
    out += _table(["Baseline", "", "Relation-based", ""], rows)
    out.append("* system BCVI/SCVI = 1 - mean over layers with a nonzero index (reconstructed formula)")
    for i, c in enumerate(s.cv, start=1):
        out.append(f"component c{i}: {_names(r, c.nodes)}")
    out.append(f"CV(S) = {_num(s.cv_system, p)}")

    out += ["", "Average system violation"]
    out += _table(
        ["alpha", "beta", "ASV"],
        [[f"{a.alpha:g}", f"{a.beta:g}", _cell(a.asv, p)] for a in s.asv],
    )

    out += ["", "Logical separation"]
    out += _table(
        ["Layer", "bcc", "bcr", "Deg", "LS", "LSI"],
        [
            [str(l.index), str(l.counts.bcc), str(l.counts.bcr), str(l.deg), _cell(l.ls, p), _num(l.lsi, p)]
            for l in r.layer_table
        ],
    )

    out += ["", f"Layering style: {r.style.value} "
            f"(tau_back={r.thresholds.tau_back:g}, tau_skip={r.thresholds.tau_skip:g})"]
    degenerate = r.degenerate_cells()
    if degenerate:
        out.append(f"no incident arcs (0/0 reported as 0): {len(degenerate)} cell(s)")
        out += [f"  {d}" for d in degenerate]
    return "\n".join(out) + "\n"
