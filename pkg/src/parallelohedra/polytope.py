"""Voronoi cells as exact H-polytopes with vertices and a full face lattice.

Vertex enumeration is an incremental double description over the
integers (rays are kept primitive); adjacency uses the combinatorial test
through an inverted constraint -> rays index.  Faces are keyed by their
vertex bitmask; the sorted active-facet set is an equivalent key.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import _linalg as la
from .lattice import Lattice

__all__ = [
    "Facet",
    "HPolytope",
    "Face",
    "FaceLatticePolytope",
    "PolygonType",
    "MVReport",
    "UnboundedPolytopeError",
    "build_voronoi_cell",
    "enumerate_vertices",
    "build_face_lattice",
    "voronoi_cell",
    "polytope_from_halfspaces",
    "project_codim2",
    "check_minkowski_venkov",
    "symmetry_center",
    "face_lattices_isomorphic",
]


class UnboundedPolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    """Halfspace <normal, x> <= offset; ``facet_vector`` set for Voronoi cells."""

    normal: tuple[Fraction, ...]
    offset: Fraction
    facet_vector: tuple[int, ...] | None = None


@dataclass(frozen=True)
class HPolytope:
    dim: int
    facets: tuple[Facet, ...]


@dataclass(frozen=True)
class Face:
    index: int
    dim: int
    facets: frozenset[int]
    vertices: tuple[int, ...]
    mask: int = field(repr=False)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.facets))


class PolygonType(str, enum.Enum):
    PARALLELOGRAM = "Parallelogram"
    CS_HEXAGON = "CSHexagon"
    OTHER = "Other"


def build_voronoi_cell(lat: Lattice) -> HPolytope:
    """H-representation of the Voronoi cell in lattice coordinates.

    The facet for relevant vector t is {x : x^T G t <= t^T G t / 2}.
    """
    facets = []
    for t in lat.relevant:
        normal = la.matvec(lat.gram, t)
        facets.append(Facet(tuple(normal), la.dot(normal, t) / 2, t))
    return HPolytope(lat.dim, tuple(facets))


# --------------------------------------------------------------------------
# double description


def _int_rows(facets: Sequence[Facet]) -> list[tuple[int, ...]]:
    """Homogenized constraints (b, -a) scaled to primitive integers."""
    rows = []
    for f in facets:
        rows.append(la.primitive((f.offset,) + tuple(-a for a in f.normal)))
    return rows


def _dd_rays(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    n = len(rows[0])
    order = []
    basis_rows: list = []
    for i, h in enumerate(rows):
        if la.rank(basis_rows + [h]) > len(basis_rows):
            basis_rows.append(h)
            order.append(i)
            if len(basis_rows) == n:
                break
    if len(basis_rows) < n:
        raise UnboundedPolytopeError("constraints do not determine a pointed cone")
    inv = la.inverse(basis_rows)
    rays = [la.primitive([inv[r][j] for r in range(n)]) for j in range(n)]
    # zero sets are bitmasks over constraint indices
    zeros = []
    for j in range(n):
        z = 0
        for k, i in enumerate(order):
            if k != j:
                z |= 1 << i
        zeros.append(z)
    processed = set(order)
    for i, h in enumerate(rows):
        if i in processed:
            continue
        vals = [sum(a * b for a, b in zip(h, r)) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in plus + zero]
        new_zeros = [zeros[k] for k in plus] + [zeros[k] | (1 << i) for k in zero]
        if minus and plus:
            # inverted index: constraint -> bitmask of rays tight on it
            tight: dict[int, int] = {}
            for k, z in enumerate(zeros):
                zz = z
                while zz:
                    low = zz & -zz
                    c = low.bit_length() - 1
                    tight[c] = tight.get(c, 0) | (1 << k)
                    zz ^= low
            need = n - 2
            for p in plus:
                zp = zeros[p]
                for m in minus:
                    common = zp & zeros[m]
                    if bin(common).count("1") < need:
                        continue
                    cand = -1
                    target = (1 << p) | (1 << m)
                    cc = common
                    while cc:
                        low = cc & -cc
                        cand &= tight[low.bit_length() - 1]
                        cc ^= low
                        if cand == target:
                            break
                    if cand != target:
                        continue
                    vp, vm = vals[p], vals[m]
                    r = [vp * a - vm * b for a, b in zip(rays[m], rays[p])]
                    g = 0
                    for x in r:
                        g = gcd(g, x)
                    new_rays.append(tuple(x // g for x in r))
                    new_zeros.append(common | (1 << i))
        rays, zeros = new_rays, new_zeros
        processed.add(i)
    return rays


def enumerate_vertices(poly: HPolytope) -> list[tuple[Fraction, ...]]:
    """Exact vertices of a bounded H-polytope, lexicographically sorted."""
    rows = _int_rows(poly.facets)
    rays = _dd_rays(rows)
    verts = set()
    for r in rays:
        if r[0] == 0:
            raise UnboundedPolytopeError("polytope is unbounded")
        if r[0] < 0:
            raise UnboundedPolytopeError("infeasible homogenized ray")
        verts.add(tuple(Fraction(x, r[0]) for x in r[1:]))
    return sorted(verts)


# --------------------------------------------------------------------------
# face lattice


class FaceLatticePolytope:
    """Facets, exact vertices and the graded face poset of a polytope."""

    def __init__(self, dim: int, facets: Sequence[Facet],
                 vertices: Sequence[tuple[Fraction, ...]]):
        self.dim = dim
        self.vertices = list(vertices)
        self._scale = la.common_denominator(x for v in self.vertices for x in v)
        self.int_vertices = [tuple(int(x * self._scale) for x in v) for v in self.vertices]
        nv = len(self.vertices)
        # facet incidence masks; drop redundant or duplicated constraints
        kept: list[Facet] = []
        masks: list[int] = []
        seen: set[int] = set()
        for f in facets:
            # integer test: <p, scale v> == offset * (p / normal) * scale
            p = la.primitive(f.normal)
            i = next(i for i, x in enumerate(f.normal) if x != 0)
            rhs = f.offset * p[i] / f.normal[i] * self._scale
            m = 0
            if rhs.denominator == 1:
                rhs = int(rhs)
                for k, v in enumerate(self.int_vertices):
                    if sum(a * b for a, b in zip(p, v)) == rhs:
                        m |= 1 << k
            if m in seen or not m:
                continue
            pts = [self.vertices[k] for k in range(nv) if m >> k & 1]
            if _affine_rank(pts) != dim - 1:
                continue
            seen.add(m)
            kept.append(f)
            masks.append(m)
        self.facets = kept
        self.facet_masks = masks
        self.int_normals = [la.primitive(f.normal) for f in kept]
        self.faces: dict[int, list[Face]] = {}
        self.children: dict[int, list[int]] = {}
        self._by_mask: dict[int, int] = {}
        self._all: list[Face] = []
        self._build()

    # -- construction -------------------------------------------------------

    def _add(self, dim: int, mask: int) -> int:
        idx = self._by_mask.get(mask)
        if idx is not None:
            return idx
        active = frozenset(j for j, fm in enumerate(self.facet_masks) if mask & fm == mask)
        verts = tuple(k for k in range(len(self.vertices)) if mask >> k & 1)
        face = Face(len(self._all), dim, active, verts, mask)
        self._all.append(face)
        self._by_mask[mask] = face.index
        self.faces.setdefault(dim, []).append(face)
        return face.index

    def _build(self) -> None:
        d = self.dim
        full = (1 << len(self.vertices)) - 1
        top = self._add(d, full)
        level = []
        for m in self.facet_masks:
            level.append(self._add(d - 1, m))
        self.children[top] = list(level)
        for k in range(d - 1, 0, -1):
            nxt: list[int] = []
            for idx in level:
                face = self._all[idx]
                cands = set()
                for j, fm in enumerate(self.facet_masks):
                    if j in face.facets:
                        continue
                    c = face.mask & fm
                    if c:
                        cands.add(c)
                maximal = [c for c in cands
                           if not any(o != c and c & o == c for o in cands)]
                kids = []
                for c in maximal:
                    known = c in self._by_mask
                    ci = self._add(k - 1, c)
                    kids.append(ci)
                    if not known:
                        nxt.append(ci)
                self.children[idx] = kids
            level = nxt
        for f in self.faces.get(0, []):
            self.children[f.index] = []
        for k in self.faces:
            self.faces[k].sort(key=lambda f: (f.key, f.vertices))

    # -- queries --------------------------------------------------------------

    def face(self, index: int) -> Face:
        return self._all[index]

    def face_by_mask(self, mask: int) -> Face | None:
        idx = self._by_mask.get(mask)
        return None if idx is None else self._all[idx]

    @property
    def all_faces(self) -> list[Face]:
        return list(self._all)

    def faces_of_codim(self, k: int) -> list[Face]:
        return self.faces.get(self.dim - k, [])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces.get(k, [])) for k in range(self.dim))

    def subfaces(self, face: Face, dim: int) -> list[Face]:
        """Faces of the given dimension contained in ``face``."""
        return [g for g in self.faces.get(dim, []) if g.mask & face.mask == g.mask]

    def join(self, a: Face, b: Face) -> Face:
        """Minimal face containing both faces."""
        mask = (1 << len(self.vertices)) - 1
        for j in a.facets & b.facets:
            mask &= self.facet_masks[j]
        return self._all[self._by_mask[mask]]

    def face_points(self, face: Face) -> list[tuple[Fraction, ...]]:
        return [self.vertices[k] for k in face.vertices]

    def centroid(self, face: Face) -> tuple[Fraction, ...]:
        pts = self.face_points(face)
        n = len(pts)
        return tuple(sum(c) / n for c in zip(*pts))

    def affine_dim(self, face: Face) -> int:
        return _affine_rank(self.face_points(face))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def __repr__(self) -> str:
        return f"FaceLatticePolytope(dim={self.dim}, f_vector={self.f_vector})"


def _affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return la.rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def build_face_lattice(poly: HPolytope,
                       vertices: Sequence[tuple[Fraction, ...]] | None = None
                       ) -> FaceLatticePolytope:
    if vertices is None:
        vertices = enumerate_vertices(poly)
    return FaceLatticePolytope(poly.dim, poly.facets, vertices)


def voronoi_cell(lat: Lattice) -> FaceLatticePolytope:
    return build_face_lattice(build_voronoi_cell(lat))


def polytope_from_halfspaces(a: Sequence[Sequence], b: Sequence) -> FaceLatticePolytope:
    """Complete polytope from raw halfspaces a x <= b."""
    facets = tuple(Facet(tuple(map(la.as_fraction, row)), la.as_fraction(bi))
                   for row, bi in zip(a, b))
    if not facets:
        raise ValueError("no halfspaces given")
    return build_face_lattice(HPolytope(len(facets[0].normal), facets))


# --------------------------------------------------------------------------
# symmetry, projections, Minkowski-Venkov


def symmetry_center(points: Iterable[Sequence]) -> tuple[Fraction, ...] | None:
    """Center of point reflection mapping the set onto itself, if any."""
    pts = [tuple(p) for p in points]
    if not pts:
        return None
    if not all(type(x) is int for p in pts for x in p):
        den = la.common_denominator(x for p in pts for x in p)
        c = symmetry_center([tuple(int(Fraction(x) * den) for x in p) for p in pts])
        return None if c is None else tuple(x / den for x in c)
    # work with n * points to stay in the integers
    n = len(pts)
    sums = [sum(col) for col in zip(*pts)]
    s = {tuple(n * x for x in p) for p in pts}
    for p in pts:
        if tuple(2 * si - n * pi for si, pi in zip(sums, p)) not in s:
            return None
    return tuple(Fraction(2 * si, 2 * n) for si in sums)


def _hull_2d(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def project_codim2(cell: FaceLatticePolytope, face: Face) -> PolygonType:
    """Classify the projection of the cell along a codimension-2 face.

    The two facet normals at the face span the annihilator of its
    direction space, so (<n1, x>, <n2, x>) is a rational projection onto a
    complement.
    """
    if face.dim != cell.dim - 2:
        raise ValueError(f"face has dimension {face.dim}, expected {cell.dim - 2}")
    j1, j2 = sorted(face.facets)[:2]
    n1, n2 = cell.int_normals[j1], cell.int_normals[j2]
    proj = {(sum(a * b for a, b in zip(n1, v)), sum(a * b for a, b in zip(n2, v)))
            for v in cell.int_vertices}
    hull = _hull_2d(proj)
    if len(hull) in (4, 6) and symmetry_center(hull) is not None:
        return PolygonType.PARALLELOGRAM if len(hull) == 4 else PolygonType.CS_HEXAGON
    return PolygonType.OTHER


@dataclass
class MVReport:
    passed: bool
    conditions: dict[int, bool]
    witness: dict | None = None
    polygon_counts: dict[str, int] = field(default_factory=dict)


def check_minkowski_venkov(cell: FaceLatticePolytope) -> MVReport:
    """Test the three Minkowski-Venkov conditions exactly."""
    conds = {1: True, 2: True, 3: True}
    witness = None
    if symmetry_center(cell.int_vertices) is None:
        conds[1] = False
        witness = {"condition": 1, "face": "cell"}
    for f in cell.faces_of_codim(1):
        if symmetry_center(cell.int_vertices[k] for k in f.vertices) is None:
            conds[2] = False
            witness = witness or {"condition": 2, "face": list(f.key),
                                  "vertex_count": len(f.vertices)}
            break
    counts = {t.value: 0 for t in PolygonType}
    for f in cell.faces_of_codim(2):
        t = project_codim2(cell, f)
        counts[t.value] += 1
        if t is PolygonType.OTHER and conds[3]:
            conds[3] = False
            witness = witness or {"condition": 3, "face": list(f.key)}
    return MVReport(all(conds.values()), conds, witness, counts)


# --------------------------------------------------------------------------
# combinatorial isomorphism


def face_lattices_isomorphic(p: FaceLatticePolytope, q: FaceLatticePolytope) -> bool:
    """Decide combinatorial equivalence via the vertex-facet incidence graph."""
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher

    if p.dim != q.dim or p.f_vector != q.f_vector:
        return False

    def graph(c: FaceLatticePolytope) -> nx.Graph:
        g = nx.Graph()
        for k in range(len(c.vertices)):
            g.add_node(("v", k), kind="v")
        for j, m in enumerate(c.facet_masks):
            g.add_node(("f", j), kind="f")
            for k in range(len(c.vertices)):
                if m >> k & 1:
                    g.add_edge(("f", j), ("v", k))
        return g

    gm = GraphMatcher(graph(p), graph(q), node_match=lambda a, b: a["kind"] == b["kind"])
    return gm.is_isomorphic()
