"""Layer recovery from package naming structure.

Packages are arranged in a responsibility tree (a trie over dotted name
segments), cut at a chosen depth into clusters, and the clusters are then
ordered top to bottom so that few arcs point upward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .graph import LayerAssignment, LayeredGraph


class RecoveryError(ValueError):
    pass


@dataclass
class TreeNode:
    path: tuple[str, ...]
    children: dict[str, "TreeNode"] = field(default_factory=dict)
    own: list[int] = field(default_factory=list)
    members: list[int] = field(default_factory=list)

    @property
    def label(self) -> str:
        return ".".join(self.path)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["TreeNode"]:
        yield self
        for child in self.children.values():
            yield from child.walk()


@dataclass
class ResponsibilityTree:
    root: TreeNode
    prefix: tuple[str, ...] = ()

    @property
    def depth(self) -> int:
        return max(len(n.path) for n in self.root.walk())

    def find(self, label: str) -> TreeNode:
        node = self.root
        for seg in label.split(".") if label else ():
            node = node.children[seg]
        return node


def _segments(name: str) -> tuple[str, ...]:
    return tuple(s for s in name.split(".") if s) or (name,)


def build_responsibility_tree(g: LayeredGraph, *, strip_common_prefix: bool = False) -> ResponsibilityTree:
    """Trie over dotted element names with lexicographic child order.

    With ``strip_common_prefix`` the segments shared by every name (the
    project's root namespace) are removed first, leaving at least one
    segment per name.
    """
    names = [_segments(el.name) for el in g.elements]
    prefix: tuple[str, ...] = ()
    if strip_common_prefix and names:
        shortest = min(len(s) for s in names)
        k = 0
        while k < shortest - 1 and all(s[k] == names[0][k] for s in names):
            k += 1
        prefix = names[0][:k]
        names = [s[k:] for s in names]

    root = TreeNode(())
    for node_id, segs in enumerate(names):
        node = root
        node.members.append(node_id)
        for seg in segs:
            if seg not in node.children:
                node.children[seg] = TreeNode(node.path + (seg,))
            node = node.children[seg]
            node.members.append(node_id)
        node.own.append(node_id)

    for node in root.walk():
        node.children = dict(sorted(node.children.items()))
    return ResponsibilityTree(root, prefix)


@dataclass(frozen=True)
class Cluster:
    label: str
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class ClusterSet:
    granularity: int
    clusters: tuple[Cluster, ...]

    def __len__(self) -> int:
        return len(self.clusters)

    def cluster_of(self) -> dict[int, int]:
        return {p: i for i, c in enumerate(self.clusters) for p in c.nodes}


def cluster_at_granularity(tree: ResponsibilityTree, granularity: int) -> ClusterSet:
    """Cut the tree at depth ``granularity``.

    Each depth-g tree node yields one cluster of everything beneath it;
    packages whose names are shorter than g form clusters of their own.
    """
    if granularity < 1:
        raise RecoveryError(f"granularity must be >= 1, got {granularity}")
    clusters: list[Cluster] = []

    def visit(node: TreeNode) -> None:
        if len(node.path) == granularity:
            clusters.append(Cluster(node.label, tuple(sorted(node.members))))
            return
        if node.own and node.path:
            clusters.append(Cluster(node.label, tuple(sorted(node.own))))
        for child in node.children.values():
            visit(child)

    visit(tree.root)
    return ClusterSet(granularity, tuple(clusters))


def cluster_weights(g: LayeredGraph, clusters: ClusterSet) -> list[list[int]]:
    """``w[i][j]`` = number of arcs from cluster i to cluster j (i != j)."""
    of = clusters.cluster_of()
    k = len(clusters)
    w = [[0] * k for _ in range(k)]
    for e in g.edges:
        a, b = of[e.src], of[e.dst]
        if a != b:
            w[a][b] += 1
    return w


def count_back_arcs(order: Sequence[int], weights: Sequence[Sequence[int]]) -> int:
    """Arcs pointing from a later (lower) position to an earlier one."""
    pos = {c: i for i, c in enumerate(order)}
    return sum(
        weights[a][b]
        for a in range(len(weights))
        for b in range(len(weights))
        if a != b and pos[a] > pos[b]
    )


def greedy_order(weights: Sequence[Sequence[int]], labels: Sequence[str]) -> list[int]:
    """Top-down greedy ordering of clusters.

    Each step places, as the next layer down, the remaining cluster with the
    fewest arcs coming from the other remaining clusters (those arcs become
    back-calls once it sits above them).  Ties prefer more outgoing weight
    to the remaining clusters, then the smaller label.
    """
    remaining = list(range(len(weights)))
    order: list[int] = []
    while remaining:

        def key(c: int) -> tuple[int, int, str]:
            back = sum(weights[o][c] for o in remaining if o != c)
            down = sum(weights[c][o] for o in remaining if o != c)
            return back, -down, labels[c]

        best = min(remaining, key=key)
        order.append(best)
        remaining.remove(best)
    return _improve(order, weights)


def _improve(order: list[int], weights: Sequence[Sequence[int]]) -> list[int]:
    # single-cluster moves; accepted only on strict improvement
    best = count_back_arcs(order, weights)
    improved = True
    while improved:
        improved = False
        for i in range(len(order)):
            for j in range(len(order)):
                if i == j:
                    continue
                trial = order[:i] + order[i + 1 :]
                trial.insert(j, order[i])
                cost = count_back_arcs(trial, weights)
                if cost < best:
                    order, best, improved = trial, cost, True
                    break
            if improved:
                break
    return order


def _merge_ranks(ranks: list[list[int]], n: int) -> list[list[int]]:
    ranks = [list(r) for r in ranks]
    while len(ranks) > n:
        i = min(range(len(ranks) - 1), key=lambda k: (len(ranks[k]) + len(ranks[k + 1]), k))
        ranks[i : i + 2] = [ranks[i] + ranks[i + 1]]
    return ranks


def order_clusters_into_layers(g: LayeredGraph, clusters: ClusterSet, layer_count: int) -> LayerAssignment:
    """Order clusters top to bottom and merge adjacent ranks into exactly
    ``layer_count`` layers (smallest combined node count merged first)."""
    if layer_count < 1:
        raise RecoveryError("layer count must be >= 1")
    if not clusters.clusters:
        raise RecoveryError("no clusters to order")
    if layer_count > len(clusters):
        raise RecoveryError(
            f"cannot form {layer_count} layers from {len(clusters)} clusters; "
            f"use --layer-count {len(clusters)} or less, or a finer granularity"
        )
    weights = cluster_weights(g, clusters)
    order = greedy_order(weights, [c.label for c in clusters.clusters])
    ranks = _merge_ranks([list(clusters.clusters[c].nodes) for c in order], layer_count)
    layer_of = {g.name(p): i for i, rank in enumerate(ranks, start=1) for p in sorted(rank)}
    # keep graph declaration order in the mapping
    layer_of = {el.name: layer_of[el.name] for el in g.elements}
    return LayerAssignment(layer_count, layer_of)


def recover_layers(
    g: LayeredGraph, granularity: int, layer_count: int, *, strip_common_prefix: bool = False
) -> LayerAssignment:
    tree = build_responsibility_tree(g, strip_common_prefix=strip_common_prefix)
    return order_clusters_into_layers(g, cluster_at_granularity(tree, granularity), layer_count)
