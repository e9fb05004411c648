"""The red Venkov graph and direct-sum decomposability."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _linalg as la
from .dual import Census, CellTag

__all__ = ["RedVenkovGraph", "Decomposition", "build_red_graph", "is_decomposable"]


def _node(t) -> tuple[int, ...]:
    return la.sign_normalized(t)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class RedVenkovGraph:
    nodes: list[tuple[int, ...]]
    edges: dict[tuple, tuple[int, ...]]  # (u, v) with u < v -> witness face key
    components: list[list[tuple[int, ...]]] = field(default_factory=list)

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    def neighbours(self, u) -> list[tuple[int, ...]]:
        return sorted({b if a == u else a for a, b in self.edges if u in (a, b)})


@dataclass
class Decomposition:
    decomposable: bool
    components: list[list[tuple[int, ...]]]
    spans: list[list[tuple[int, ...]]]  # integer basis of each component's span

    @property
    def ranks(self) -> list[int]:
        return [len(s) for s in self.spans]


def build_red_graph(census: Census) -> RedVenkovGraph:
    """Nodes are facet pairs +-t (represented by the sign-normalized t); two
    are joined when their facets meet at a codimension-2 face with a
    triangular dual cell."""
    nodes = sorted({_node(t) for t in census.lattice.relevant})
    edges: dict[tuple, tuple[int, ...]] = {}
    for face in census.cell.faces_of_codim(2):
        cell = census.dual_of(face)
        if cell.tag is not CellTag.TRIANGLE:
            continue
        pts = cell.points
        classes = [_node([b - a for a, b in zip(pts[i], pts[j])])
                   for i, j in ((0, 1), (0, 2), (1, 2))]
        for i, j in ((0, 1), (0, 2), (1, 2)):
            u, v = sorted((classes[i], classes[j]))
            edges.setdefault((u, v), face.key)
    uf = _UnionFind(nodes)
    for u, v in edges:
        uf.union(u, v)
    groups: dict = {}
    for n in nodes:
        groups.setdefault(uf.find(n), []).append(n)
    comps = sorted(groups.values())
    return RedVenkovGraph(nodes, dict(sorted(edges.items())), comps)


def _span_basis(vectors) -> list[tuple[int, ...]]:
    rref, _ = la.row_reduce([list(v) for v in vectors])
    return [la.primitive(row) for row in rref]


def is_decomposable(graph: RedVenkovGraph) -> Decomposition:
    spans = [_span_basis(c) for c in graph.components]
    return Decomposition(len(graph.components) >= 2, graph.components, spans)
