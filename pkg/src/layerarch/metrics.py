"""Relation-based layering metrics and the module-based baseline indices.

Every index is computed from exact integer counts.  Ratios are carried as
:class:`Ratio` so reports can print ``2/9=0.22`` style cells and so that an
undefined ``0/0`` stays visible as a degenerate marker instead of vanishing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import LayeredGraph, SccDecomposition, scc_decompose

# (alpha, beta) pairs of the default penalty sweep: four closed-layering
# settings followed by three open-layering ones (beta = 0).
DEFAULT_PENALTY_SWEEP: tuple[tuple[float, float], ...] = (
    (0.5, 0.5),
    (0.75, 0.5),
    (1.0, 0.5),
    (1.0, 1.0),
    (0.5, 0.0),
    (0.75, 0.0),
    (1.0, 0.0),
)


class EdgeClass(str, enum.Enum):
    NORMAL = "Normal"
    BACK = "Back"
    SKIP = "Skip"


def classify(src_layer: int, dst_layer: int) -> EdgeClass:
    """Classify one arc from its endpoint layers (1 = top)."""
    if src_layer > dst_layer:
        return EdgeClass.BACK
    if dst_layer - src_layer >= 2:
        return EdgeClass.SKIP
    return EdgeClass.NORMAL


def classify_edges(g: LayeredGraph) -> tuple[EdgeClass, ...]:
    return tuple(classify(g.layer_of(e.src), g.layer_of(e.dst)) for e in g.edges)


@dataclass(frozen=True)
class Ratio:
    """``num / den`` with ``0/0`` defined as 0 and flagged degenerate."""

    num: float
    den: int

    @property
    def value(self) -> float:
        return self.num / self.den if self.den else 0.0

    @property
    def degenerate(self) -> bool:
        return self.den == 0

    def complement(self) -> float:
        return 1.0 - self.value

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        num = int(self.num) if float(self.num).is_integer() else self.num
        return f"{num}/{self.den}"


@dataclass(frozen=True)
class PenaltyConfig:
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for label, v in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{label} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class StyleThresholds:
    tau_back: float = 0.0
    tau_skip: float = 0.0

    def __post_init__(self) -> None:
        for label, v in (("tau_back", self.tau_back), ("tau_skip", self.tau_skip)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{label} must lie in [0, 1], got {v}")


class Style(str, enum.Enum):
    CLOSED = "closed-conformant"
    OPEN = "open"
    NON_LAYERED = "non-layered"


@dataclass(frozen=True)
class Counts:
    """Violation arc counts split by role: back caller/called, skip caller/called."""

    bcc: int = 0
    bcr: int = 0
    scc: int = 0
    scr: int = 0


@dataclass(frozen=True)
class ViolationSets:
    edge_classes: tuple[EdgeClass, ...]
    bv: frozenset[int]
    sv: frozenset[int]
    cb: frozenset[int]
    cs: frozenset[int]
    per_node: tuple[Counts, ...]
    per_layer: tuple[Counts, ...]

    @property
    def rb(self) -> frozenset[int]:
        return self.bv - self.cb

    @property
    def rs(self) -> frozenset[int]:
        return self.sv - self.cs

    def node(self, p: int) -> Counts:
        return self.per_node[p]

    def layer(self, l: int) -> Counts:
        return self.per_layer[l - 1]


def violation_sets(g: LayeredGraph, scc: SccDecomposition | None = None) -> ViolationSets:
    """Back/skip arc sets, their on-cycle parts, and role counts.

    An arc is on a cycle iff both endpoints share a strongly connected
    component.
    """
    if scc is None:
        scc = scc_decompose(g)
    classes = classify_edges(g)
    n, k = len(g.elements), g.layer_count
    node = [[0, 0, 0, 0] for _ in range(n)]
    layer = [[0, 0, 0, 0] for _ in range(k)]
    bv, sv, cb, cs = set(), set(), set(), set()
    for e, cls in zip(g.edges, classes):
        if cls is EdgeClass.NORMAL:
            continue
        on_cycle = scc.same_component(e.src, e.dst)
        off = 0 if cls is EdgeClass.BACK else 2
        if cls is EdgeClass.BACK:
            bv.add(e.id)
            if on_cycle:
                cb.add(e.id)
        else:
            sv.add(e.id)
            if on_cycle:
                cs.add(e.id)
        node[e.src][off] += 1
        node[e.dst][off + 1] += 1
        layer[g.layer_of(e.src) - 1][off] += 1
        layer[g.layer_of(e.dst) - 1][off + 1] += 1
    return ViolationSets(
        classes,
        frozenset(bv),
        frozenset(sv),
        frozenset(cb),
        frozenset(cs),
        tuple(Counts(*c) for c in node),
        tuple(Counts(*c) for c in layer),
    )


# ---- node level ----------------------------------------------------------


def bvm_caller(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    return Ratio(v.node(m).bcc, g.node_degrees(m)[1])


def bvm_called(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    return Ratio(v.node(m).bcr, g.node_degrees(m)[0])


def bvm(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    c = v.node(m)
    return Ratio(c.bcc + c.bcr, g.node_degrees(m)[2])


def svm_caller(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    return Ratio(v.node(m).scc, g.node_degrees(m)[1])


def svm_called(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    return Ratio(v.node(m).scr, g.node_degrees(m)[0])


def svm(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    c = v.node(m)
    return Ratio(c.scc + c.scr, g.node_degrees(m)[2])


def node_av(v: ViolationSets, g: LayeredGraph, m: int) -> Ratio:
    c = v.node(m)
    return Ratio(c.bcc + c.bcr + c.scc + c.scr, g.node_degrees(m)[2])


# ---- layer level ---------------------------------------------------------


def bvl(v: ViolationSets, g: LayeredGraph, l: int) -> Ratio:
    # back arcs never stay inside a layer, so caller + called counts are
    # exactly the violating arcs incident to l
    c = v.layer(l)
    return Ratio(c.bcc + c.bcr, g.layer_degrees(l)[2])


def svl(v: ViolationSets, g: LayeredGraph, l: int) -> Ratio:
    c = v.layer(l)
    return Ratio(c.scc + c.scr, g.layer_degrees(l)[2])


@dataclass(frozen=True)
class LogicalSeparation:
    ls: Ratio

    @property
    def lsi(self) -> float:
        return 1.0 - self.ls.value


def logical_separation(v: ViolationSets, g: LayeredGraph, l: int) -> LogicalSeparation:
    return LogicalSeparation(bvl(v, g, l))


# ---- system level --------------------------------------------------------


def bvs(v: ViolationSets, g: LayeredGraph) -> Ratio:
    return Ratio(len(v.bv), len(g.edges))


def svs(v: ViolationSets, g: LayeredGraph) -> Ratio:
    return Ratio(len(v.sv), len(g.edges))


@dataclass(frozen=True)
class ComponentViolation:
    nodes: tuple[int, ...]
    cv: Ratio


def cyclic_violation(
    v: ViolationSets, g: LayeredGraph, scc: SccDecomposition
) -> list[ComponentViolation]:
    """Share of Back/Skip arcs inside each nontrivial SCC, largest first."""
    out = []
    for ci in scc.nontrivial():
        edges = scc.component_edges[ci]
        bad = sum(1 for e in edges if v.edge_classes[e] is not EdgeClass.NORMAL)
        out.append(ComponentViolation(scc.components[ci], Ratio(bad, len(edges))))
    out.sort(key=lambda c: (-len(c.nodes), c.nodes[0]))
    return out


def system_cv(components: Sequence[ComponentViolation]) -> float:
    return components[0].cv.value if components else 0.0


def asv(v: ViolationSets, g: LayeredGraph, p: PenaltyConfig) -> Ratio:
    """Penalty-weighted violation share; on-cycle arcs are charged twice."""
    cb, rb, cs, rs = len(v.cb), len(v.rb), len(v.cs), len(v.rs)
    num = 2 * p.alpha * cb + p.alpha * rb + 2 * p.beta * cs + p.beta * rs
    return Ratio(num, len(g.edges) + cb + cs)


# ---- baseline ------------------------------------------------------------


@dataclass(frozen=True)
class BaselineReport:
    """Module-based indices computed from violating caller modules.

    The system-level BCVI/SCVI formula (one minus the mean over layers with
    a nonzero index) is a reconstruction; ``reconstructed`` records that.
    """

    back: tuple[int, ...]
    l_back: tuple[int, ...]
    bcvi: tuple[Ratio, ...]
    bcvi_system: float
    skip: tuple[int, ...]
    l_skip: tuple[int, ...]
    scvi: tuple[Ratio, ...]
    scvi_system: float
    dcvi: tuple[ComponentViolation, ...]
    reconstructed: bool = True


def _module_index(g: LayeredGraph, modules: Iterable[int]) -> tuple[tuple[Ratio, ...], float]:
    modules = set(modules)
    per_layer = []
    for l in range(1, g.layer_count + 1):
        members = g.layer_members(l)
        per_layer.append(Ratio(sum(1 for p in members if p in modules), len(members)))
    violating = [r.value for r in per_layer if r.value > 0]
    mean = sum(violating) / len(violating) if violating else 0.0
    return tuple(per_layer), 1.0 - mean


def baseline_indices(
    v: ViolationSets, g: LayeredGraph, scc: SccDecomposition | None = None
) -> BaselineReport:
    if scc is None:
        scc = scc_decompose(g)
    back = sorted({g.edges[e].src for e in v.bv})
    skip = sorted({g.edges[e].src for e in v.sv})
    bcvi, bcvi_sys = _module_index(g, back)
    scvi, scvi_sys = _module_index(g, skip)
    dcvi = []
    for ci in scc.nontrivial():
        edges = scc.component_edges[ci]
        crossing = sum(
            1 for e in edges if g.layer_of(g.edges[e].src) != g.layer_of(g.edges[e].dst)
        )
        dcvi.append(ComponentViolation(scc.components[ci], Ratio(crossing, len(edges))))
    dcvi.sort(key=lambda c: (-len(c.nodes), c.nodes[0]))
    return BaselineReport(
        back=tuple(back),
        l_back=tuple(sorted({g.layer_of(p) for p in back})),
        bcvi=bcvi,
        bcvi_system=bcvi_sys,
        skip=tuple(skip),
        l_skip=tuple(sorted({g.layer_of(p) for p in skip})),
        scvi=scvi,
        scvi_system=scvi_sys,
        dcvi=tuple(dcvi),
    )


def classify_style(
    v: ViolationSets, g: LayeredGraph, thresholds: StyleThresholds = StyleThresholds()
) -> Style:
    if bvs(v, g).value > thresholds.tau_back:
        return Style.NON_LAYERED
    if svs(v, g).value > thresholds.tau_skip:
        return Style.OPEN
    return Style.CLOSED


# ---- full report ---------------------------------------------------------


@dataclass(frozen=True)
class EdgeRow:
    id: int
    src: str
    dst: str
    src_layer: int
    dst_layer: int
    cls: EdgeClass
    on_cycle: bool


@dataclass(frozen=True)
class NodeRow:
    name: str
    layer: int
    in_deg: int
    out_deg: int
    deg: int
    counts: Counts
    bvm_caller: Ratio
    bvm_called: Ratio
    bvm: Ratio
    svm_caller: Ratio
    svm_called: Ratio
    svm: Ratio
    av: Ratio


@dataclass(frozen=True)
class LayerRow:
    index: int
    name: str | None
    size: int
    in_deg: int
    out_deg: int
    deg: int
    intra: int
    counts: Counts
    bvc: Ratio
    bvr: Ratio
    bvl: Ratio
    svc: Ratio
    svr: Ratio
    svl: Ratio
    av: Ratio
    ls: Ratio
    lsi: float


@dataclass(frozen=True)
class AsvEntry:
    alpha: float
    beta: float
    asv: Ratio


@dataclass(frozen=True)
class SystemRow:
    edges: int
    bv: tuple[int, ...]
    sv: tuple[int, ...]
    cb: tuple[int, ...]
    cs: tuple[int, ...]
    bvs: Ratio
    svs: Ratio
    bvs_conformance: float
    svs_conformance: float
    asv: tuple[AsvEntry, ...]
    cv: tuple[ComponentViolation, ...]
    cv_system: float


@dataclass(frozen=True)
class MetricsReport:
    nodes: tuple[str, ...]
    edges: tuple[EdgeRow, ...]
    node_table: tuple[NodeRow, ...]
    layer_table: tuple[LayerRow, ...]
    system: SystemRow
    baseline: BaselineReport
    style: Style
    thresholds: StyleThresholds = field(default_factory=StyleThresholds)

    @property
    def lsi(self) -> tuple[float, ...]:
        return tuple(row.lsi for row in self.layer_table)

    def degenerate_cells(self) -> list[str]:
        """Labels of every ratio reported as 0 because it was 0/0."""
        out = []
        for row in self.node_table:
            for f in ("bvm_caller", "bvm_called", "bvm", "svm_caller", "svm_called", "svm", "av"):
                if getattr(row, f).degenerate:
                    out.append(f"node {row.name}: {f}")
        for row in self.layer_table:
            for f in ("bvc", "bvr", "bvl", "svc", "svr", "svl", "av", "ls"):
                if getattr(row, f).degenerate:
                    out.append(f"layer {row.index}: {f}")
        if self.system.bvs.degenerate:
            out.append("system: no incident arcs")
        return out


def analyze(
    g: LayeredGraph,
    penalties: Sequence[PenaltyConfig | tuple[float, float]] = DEFAULT_PENALTY_SWEEP,
    thresholds: StyleThresholds = StyleThresholds(),
) -> MetricsReport:
    """Compute every node, layer, system and baseline index for ``g``."""
    scc = scc_decompose(g)
    v = violation_sets(g, scc)
    penalties = [p if isinstance(p, PenaltyConfig) else PenaltyConfig(*p) for p in penalties]

    edges = tuple(
        EdgeRow(
            e.id,
            g.name(e.src),
            g.name(e.dst),
            g.layer_of(e.src),
            g.layer_of(e.dst),
            v.edge_classes[e.id],
            scc.same_component(e.src, e.dst),
        )
        for e in g.edges
    )
    node_table = tuple(
        NodeRow(
            g.name(m),
            g.layer_of(m),
            *g.node_degrees(m),
            v.node(m),
            bvm_caller(v, g, m),
            bvm_called(v, g, m),
            bvm(v, g, m),
            svm_caller(v, g, m),
            svm_called(v, g, m),
            svm(v, g, m),
            node_av(v, g, m),
        )
        for m in range(len(g.elements))
    )
    layer_rows = []
    for l in range(1, g.layer_count + 1):
        indeg, outdeg, deg, intra = g.layer_degrees(l)
        c = v.layer(l)
        sep = logical_separation(v, g, l)
        layer_rows.append(
            LayerRow(
                index=l,
                name=g.layers.layer_names.get(l),
                size=len(g.layer_members(l)),
                in_deg=indeg,
                out_deg=outdeg,
                deg=deg,
                intra=intra,
                counts=c,
                bvc=Ratio(c.bcc, outdeg),
                bvr=Ratio(c.bcr, indeg),
                bvl=bvl(v, g, l),
                svc=Ratio(c.scc, outdeg),
                svr=Ratio(c.scr, indeg),
                svl=svl(v, g, l),
                av=Ratio(c.bcc + c.bcr + c.scc + c.scr, deg),
                ls=sep.ls,
                lsi=sep.lsi,
            )
        )
    cv = tuple(cyclic_violation(v, g, scc))
    b, s = bvs(v, g), svs(v, g)
    system = SystemRow(
        edges=len(g.edges),
        bv=tuple(sorted(v.bv)),
        sv=tuple(sorted(v.sv)),
        cb=tuple(sorted(v.cb)),
        cs=tuple(sorted(v.cs)),
        bvs=b,
        svs=s,
        bvs_conformance=b.complement(),
        svs_conformance=s.complement(),
        asv=tuple(AsvEntry(p.alpha, p.beta, asv(v, g, p)) for p in penalties),
        cv=cv,
        cv_system=system_cv(cv),
    )
    return MetricsReport(
        nodes=tuple(el.name for el in g.elements),
        edges=edges,
        node_table=node_table,
        layer_table=tuple(layer_rows),
        system=system,
        baseline=baseline_indices(v, g, scc),
        style=classify_style(v, g, thresholds),
        thresholds=thresholds,
    )
