"""Gain functions, coherence of parallelogram cells and canonical scaling.

Facet normals default to G t (the Voronoi normals, for which every gain
is 1).  Any per-class map of normals can be supplied instead, which is how
non-trivial gains are exercised.  Scaling values live on facet
translation classes: the facets of P with vectors t and -t are the same
facet of the tiling up to translation.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import _linalg as la
from .dual import Census, CellTag, _prism_split
from .lattice import Lattice
from .polytope import Face

__all__ = [
    "Normals",
    "voronoi_normals",
    "TriangleDependence",
    "dependence_coefficients",
    "triangle_dependence",
    "gain",
    "path_gain",
    "extended_gain",
    "pyramid_parents",
    "Coherence",
    "CoherenceResult",
    "coherence_check",
    "GainGraph",
    "build_gain_graph",
    "ScalingState",
    "ScalingFailure",
    "propagate",
    "construct_scaling",
    "ScalingReport",
    "verify_scaling",
    "QuadraticFormCertificate",
    "QuadraticFormFailure",
    "reconstruct_quadratic_form",
    "fan_cycle_gains",
    "prism_cycle_identities",
]

Vec = tuple
Normals = Mapping[tuple, tuple]


def _key(t: Sequence[int]) -> tuple[int, ...]:
    return la.sign_normalized(tuple(t))


def _sub(b, a) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def voronoi_normals(lat: Lattice) -> dict[tuple, tuple]:
    return {_key(t): tuple(la.matvec(lat.gram, _key(t))) for t in lat.relevant}


def normal_of(normals: Normals, t: Sequence[int]) -> tuple:
    k = _key(t)
    n = normals[k]
    return tuple(n) if k == tuple(t) else tuple(-x for x in n)


# --------------------------------------------------------------------------
# triangle gains


@dataclass(frozen=True)
class TriangleDependence:
    cell: tuple  # (A, B, C)
    coefficients: tuple[Fraction, Fraction, Fraction]  # alpha_AB, alpha_BC, alpha_CA

    @property
    def edges(self) -> tuple:
        a, b, c = self.cell
        return (_sub(b, a), _sub(c, b), _sub(a, c))

    def coefficient(self, f: Sequence[int]) -> Fraction:
        f = tuple(f)
        neg = tuple(-x for x in f)
        for e, alpha in zip(self.edges, self.coefficients):
            if e == f or e == neg:
                return alpha
        raise ValueError(f"{f} is not an edge of the triangle {self.cell}")


def dependence_coefficients(n1, n2, n3) -> tuple[Fraction, Fraction, Fraction]:
    """The unique (up to scale) dependence a1 n1 + a2 n2 + a3 n3 = 0,
    normalized so the first coefficient is 1."""
    cols = [list(map(la.as_fraction, n)) for n in (n1, n2, n3)]
    m = [[cols[j][i] for j in range(3)] for i in range(len(cols[0]))]
    ker = la.nullspace(m, 3)
    if len(ker) != 1:
        raise ValueError(f"normals span a space of rank {3 - len(ker)}, expected 2")
    k = ker[0]
    first = next(x for x in k if x != 0)
    alpha = tuple(x / first for x in k)
    if any(x == 0 for x in alpha):
        raise ValueError("dependence has a zero coefficient")
    return alpha


def triangle_dependence(cell, normals: Normals) -> TriangleDependence:
    pts = cell.points if hasattr(cell, "points") else tuple(map(tuple, cell))
    if len(pts) != 3:
        raise ValueError("a triangle has three points")
    a, b, c = pts
    ns = [normal_of(normals, e) for e in (_sub(b, a), _sub(c, b), _sub(a, c))]
    return TriangleDependence((a, b, c), dependence_coefficients(*ns))


def gain(f1: Sequence[int], f2: Sequence[int], via: TriangleDependence) -> Fraction:
    """gamma(f1, f2) = |alpha_f2| / |alpha_f1| inside one triangle."""
    return abs(via.coefficient(f2)) / abs(via.coefficient(f1))


def path_gain(steps: Sequence[tuple[Sequence[int], Sequence[int], TriangleDependence]]
              ) -> Fraction:
    out = Fraction(1)
    for f1, f2, dep in steps:
        out *= gain(f1, f2, dep)
    return out


# --------------------------------------------------------------------------
# extended gain through pyramids, coherence


def pyramid_parents(census: Census, face: Face) -> list[tuple[Face, tuple]]:
    """Codimension-3 subfaces whose dual cell is a pyramid over this face's
    parallelogram, with the apex."""
    base = set(census.dual_of(face).points)
    out = []
    for ci in census.cell.children.get(face.index, []):
        h = census.cell.face(ci)
        dh = census.dual_of(h)
        if dh.tag is CellTag.PYRAMID_OVER_PARALLELOGRAM:
            apex = [p for p in dh.points if p not in base]
            if len(apex) == 1:
                out.append((h, apex[0]))
    return out


def _parallelogram_corners(points) -> list[tuple]:
    """(K, L, M) triples: L a corner, K and M its two neighbours."""
    pts = list(points)
    out = []
    for l in pts:
        others = [p for p in pts if p != l]
        # the opposite corner is the one with l + opp = sum of the other two
        for opp in others:
            k, m = [p for p in others if p != opp]
            if tuple(a + b for a, b in zip(l, opp)) == tuple(a + b for a, b in zip(k, m)):
                out.append((k, l, m))
                break
    return out


GainFn = Callable[[tuple, Sequence[int], Sequence[int]], Fraction]


def _default_gain_fn(normals: Normals) -> GainFn:
    cache: dict = {}

    def fn(tri, f1, f2):
        tri = tuple(sorted(tri))
        dep = cache.get(tri)
        if dep is None:
            dep = cache[tri] = triangle_dependence(tri, normals)
        return gain(f1, f2, dep)
    return fn


def extended_gain(kl: tuple, lm: tuple, apex: tuple, normals: Normals | None = None,
                  gain_fn: GainFn | None = None) -> Fraction:
    """gamma(KL, LM) := gamma(KL, OL) * gamma(OL, LM) for a pyramid O.KLMN.

    ``kl`` and ``lm`` are point pairs (K, L) and (L, M).
    """
    if gain_fn is None:
        gain_fn = _default_gain_fn(normals)
    (k, l), (l2, m) = kl, lm
    if l != l2:
        raise ValueError("sides must share the corner L")
    ol = _sub(l, apex)
    return (gain_fn((apex, k, l), _sub(l, k), ol)
            * gain_fn((apex, l, m), ol, _sub(m, l)))


class Coherence(str, enum.Enum):
    COHERENT = "Coherent"
    INCOHERENT = "Incoherent"
    INAPPLICABLE = "Inapplicable"


@dataclass
class CoherenceResult:
    status: Coherence
    values: dict = field(default_factory=dict)  # corner L -> value
    witness: dict | None = None


def coherence_check(census: Census, face: Face, normals: Normals | None = None,
                    gain_fn: GainFn | None = None,
                    apexes: Sequence[tuple] | None = None) -> CoherenceResult:
    """Compare extended gains of a parallelogram dual cell across apexes.

    ``apexes`` overrides the pyramid parents found in the census.
    """
    cell = census.dual_of(face)
    if cell.tag is not CellTag.PARALLELOGRAM:
        raise ValueError("coherence is defined for parallelogram dual cells")
    if apexes is None:
        apexes = [a for _, a in pyramid_parents(census, face)]
    if not apexes:
        return CoherenceResult(Coherence.INAPPLICABLE)
    if gain_fn is None:
        gain_fn = _default_gain_fn(voronoi_normals(census.lattice) if normals is None else normals)
    values = {}
    for k, l, m in _parallelogram_corners(cell.points):
        per = {o: extended_gain((k, l), (l, m), o, gain_fn=gain_fn) for o in apexes}
        first = apexes[0]
        for o in apexes[1:]:
            if per[o] != per[first]:
                return CoherenceResult(Coherence.INCOHERENT, witness={
                    "corner": l, "apexes": (first, o), "values": (per[first], per[o])})
        values[l] = per[first]
    return CoherenceResult(Coherence.COHERENT, values)


# --------------------------------------------------------------------------
# gain graph and propagation


@dataclass
class GainGraph:
    nodes: list[tuple]
    # (p, q, gamma(p, q), witness triangle)
    edges: list[tuple] = field(default_factory=list)

    def adjacency(self) -> dict:
        adj: dict = {n: [] for n in self.nodes}
        for i, (p, q, g, _) in enumerate(self.edges):
            adj[p].append((q, g, i))
            adj[q].append((p, 1 / g, i))
        for n in adj:
            adj[n].sort(key=lambda x: (x[0], x[2]))
        return adj


def build_gain_graph(census: Census, normals: Normals | None = None) -> GainGraph:
    normals = voronoi_normals(census.lattice) if normals is None else normals
    nodes = sorted({_key(t) for t in census.lattice.relevant})
    g = GainGraph(nodes)
    for cell in census.cells(2):
        if cell.tag is not CellTag.TRIANGLE:
            continue
        dep = triangle_dependence(cell, normals)
        es = dep.edges
        for i, j in ((0, 1), (1, 2), (0, 2)):
            g.edges.append((_key(es[i]), _key(es[j]), gain(es[i], es[j], dep), cell.points))
    return g


@dataclass
class ScalingState:
    values: dict[tuple, Fraction]  # every facet vector t (both signs)
    class_values: dict[tuple, Fraction]
    tree: list[tuple]  # (parent, child, edge index)
    cycle_log: list[tuple]  # (cycle node list, gain)
    roots: list[tuple]

    @property
    def ok(self) -> bool:
        return True


@dataclass
class ScalingFailure:
    cycle: list[tuple]
    gain: Fraction
    edge: tuple

    @property
    def ok(self) -> bool:
        return False


def _tree_path(parent: dict, a) -> list:
    path = [a]
    while parent[a] is not None:
        a = parent[a][0]
        path.append(a)
    return path


def propagate(graph: GainGraph) -> ScalingState | ScalingFailure:
    """BFS spanning forest rooted lexicographically; s(q) = s(p) gamma(p, q)."""
    adj = graph.adjacency()
    s: dict = {}
    parent: dict = {}
    tree = []
    roots = []
    for root in graph.nodes:
        if root in s:
            continue
        roots.append(root)
        s[root] = Fraction(1)
        parent[root] = None
        queue = deque([root])
        while queue:
            p = queue.popleft()
            for q, g, i in adj[p]:
                if q not in s:
                    s[q] = s[p] * g
                    parent[q] = (p, i)
                    tree.append((p, q, i))
                    queue.append(q)
    tree_edges = {i for _, _, i in tree}
    log = []
    for i, (p, q, g, _) in enumerate(graph.edges):
        if i in tree_edges:
            continue
        cyc_gain = s[p] * g / s[q]
        pp, qq = _tree_path(parent, p), _tree_path(parent, q)
        common = set(pp) & set(qq)
        pp = pp[:next(k for k, x in enumerate(pp) if x in common) + 1]
        qq = qq[:next(k for k, x in enumerate(qq) if x in common)]
        cycle = list(reversed(pp)) + [q] + qq[1:] if qq else list(reversed(pp)) + [q]
        log.append((cycle, cyc_gain))
        if cyc_gain != 1:
            return ScalingFailure(cycle, cyc_gain, graph.edges[i][:3])
    values = {}
    for k, v in s.items():
        values[k] = v
        values[tuple(-x for x in k)] = v
    return ScalingState(dict(sorted(values.items())), dict(sorted(s.items())), tree, log, roots)


def construct_scaling(census: Census, normals: Normals | None = None
                      ) -> ScalingState | ScalingFailure:
    return propagate(build_gain_graph(census, normals))


# --------------------------------------------------------------------------
# verification


def _dual2_edges(points) -> list[tuple]:
    """Edges of a dual 2-cell as facet vectors (triangle: 3, parallelogram: 4)."""
    pts = list(points)
    if len(pts) == 3:
        return [_sub(pts[j], pts[i]) for i, j in ((0, 1), (1, 2), (2, 0))]
    sides = set()
    for k, l, m in _parallelogram_corners(pts):
        sides.add(tuple(sorted((k, l))))
        sides.add(tuple(sorted((l, m))))
    return [_sub(b, a) for a, b in sorted(sides)]


@dataclass
class ScalingReport:
    passed: bool
    checked: int
    signs: dict = field(default_factory=dict)  # face key -> sign pattern
    failure: dict | None = None
    strengthened_equality: bool = True


def verify_scaling(census: Census, s: ScalingState | Mapping, normals: Normals | None = None
                   ) -> ScalingReport:
    """Check the signed vanishing condition at every codimension-2 face."""
    normals = voronoi_normals(census.lattice) if normals is None else normals
    values = s.values if isinstance(s, ScalingState) else dict(s)

    def sv(t):
        v = values.get(tuple(t))
        if v is None:
            v = values[tuple(-x for x in t)]
        return la.as_fraction(v)

    if any(sv(t) <= 0 for t in census.lattice.relevant):
        raise ValueError("scaling values must be strictly positive")
    rep = ScalingReport(True, 0)
    for face in census.cell.faces_of_codim(2):
        cell = census.dual_of(face)
        edges = _dual2_edges(cell.points)
        vecs = [tuple(sv(e) * x for x in normal_of(normals, e)) for e in edges]
        rep.checked += 1
        found = None
        for signs in itertools.product((1, -1), repeat=len(vecs) - 1):
            signs = (1,) + signs
            if all(sum(sg * v[i] for sg, v in zip(signs, vecs)) == 0 for i in range(len(vecs[0]))):
                found = signs
                break
        if found is None:
            rep.passed = False
            rep.failure = {"face": face.key, "dual_cell": cell.points}
            break
        rep.signs[face.key] = found
    # parallel facet classes with different values
    keys = sorted({_key(t) for t in census.lattice.relevant})
    for a, b in itertools.combinations(keys, 2):
        if la.rank([normal_of(normals, a), normal_of(normals, b)]) == 1 and sv(a) != sv(b):
            rep.strengthened_equality = False
    return rep


# --------------------------------------------------------------------------
# quadratic form


@dataclass
class QuadraticFormCertificate:
    q: list[list[Fraction]]
    q_cartesian: list[list[Fraction]] | None = None

    def proportional_to(self, g) -> Fraction | None:
        """c with Q = c g, if it exists."""
        c = None
        for row_q, row_g in zip(self.q, g):
            for x, y in zip(row_q, row_g):
                y = la.as_fraction(y)
                if y == 0:
                    if x != 0:
                        return None
                    continue
                r = x / y
                if c is None:
                    c = r
                elif r != c:
                    return None
        return c


@dataclass
class QuadraticFormFailure:
    reason: str
    facets: tuple = ()


def _solve_symmetric(eqs: list[tuple[tuple, tuple]], d: int):
    idx = [(i, j) for i in range(d) for j in range(i, d)]
    pos = {p: k for k, p in enumerate(idx)}
    rows, rhs = [], []
    for t, target in eqs:
        for i in range(d):
            row = [Fraction(0)] * len(idx)
            for j in range(d):
                row[pos[(min(i, j), max(i, j))]] += t[j]
            rows.append(row)
            rhs.append(la.as_fraction(target[i]))
    sol = la.solve(rows, rhs)
    if sol is None:
        return None
    m = [[Fraction(0)] * d for _ in range(d)]
    for (i, j), k in pos.items():
        m[i][j] = m[j][i] = sol[k]
    return m


def reconstruct_quadratic_form(lat: Lattice, s: ScalingState | Mapping,
                               normals: Normals | None = None, cell=None
                               ) -> QuadraticFormCertificate | QuadraticFormFailure:
    """Solve Q t = s(t) n_t over all facet classes and certify Q.

    The global proportionality constant is fixed to 1.
    """
    from .polytope import voronoi_cell

    normals = voronoi_normals(lat) if normals is None else normals
    values = s.values if isinstance(s, ScalingState) else dict(s)
    keys = sorted({_key(t) for t in lat.relevant})
    eqs = []
    for k in keys:
        v = values.get(k, values.get(tuple(-x for x in k)))
        eqs.append((k, tuple(la.as_fraction(v) * x for x in normals[k])))
    q = _solve_symmetric(eqs, lat.dim)
    if q is None:
        n = next(n for n in range(1, len(eqs) + 1)
                 if _solve_symmetric(eqs[:n], lat.dim) is None)
        partner = next((m for m in range(n - 1)
                        if _solve_symmetric([eqs[m], eqs[n - 1]], lat.dim) is None), 0)
        return QuadraticFormFailure("inconsistent system",
                                    (eqs[partner][0], eqs[n - 1][0]))
    if any(m <= 0 for m in la.leading_minors(q)):
        return QuadraticFormFailure("not positive definite")
    qlat = Lattice.from_gram(q)
    if set(qlat.relevant) != set(lat.relevant):
        return QuadraticFormFailure("facet vectors differ")
    cell = cell if cell is not None else voronoi_cell(lat)
    for f in cell.facets:
        t = f.facet_vector
        qt = la.matvec(q, t)
        # Q t = lam n and t^T Q t / 2 = lam b for one lam > 0
        lam = next(a / b for a, b in zip(qt, f.normal) if b != 0)
        if lam <= 0 or any(a != lam * b for a, b in zip(qt, f.normal)) \
                or la.dot(t, qt) / 2 != lam * f.offset:
            return QuadraticFormFailure("facet hyperplanes differ", (t,))
    qc = None
    if lat.basis is not None:
        binv = la.inverse(lat.basis)
        qc = la.matmul(la.matmul(la.transpose(binv), q), binv)
    return QuadraticFormCertificate(q, qc)


# --------------------------------------------------------------------------
# cycle identities


def _parents(census: Census, face: Face, dim: int) -> list[Face]:
    return [g for g in census.cell.faces.get(dim, []) if g.mask & face.mask == face.mask]


def fan_cycle_gains(census: Census, normals: Normals | None = None) -> list[tuple]:
    """Gain around the origin in the dual cell of every codimension-3 face
    of P with a tetrahedral, octahedral or pyramidal dual cell, whenever
    all 2-cells at the origin are triangles.

    The faces of P containing H are exactly the 2-cells of D(H) through the
    origin, and every vertex fan of every dual 3-cell arises this way for
    some face of P.  Returns (face key, gain) records.
    """
    normals = voronoi_normals(census.lattice) if normals is None else normals
    gf = _default_gain_fn(normals)
    d = census.dim
    o = (0,) * d
    out = []
    ok_tags = (CellTag.TETRAHEDRON, CellTag.OCTAHEDRON, CellTag.PYRAMID_OVER_PARALLELOGRAM)
    for face in census.cell.faces_of_codim(3):
        if census.dual_of(face).tag not in ok_tags:
            continue
        at_o = [census.dual_of(r).points for r in _parents(census, face, d - 2)]
        if any(len(c) != 3 for c in at_o):
            continue
        # each triangle O X Y links the edges OX and OY
        links: dict = {}
        for c in at_o:
            x, y = [p for p in c if p != o]
            links.setdefault(x, []).append((y, c))
            links.setdefault(y, []).append((x, c))
        if any(len(v) != 2 for v in links.values()):
            continue
        start = min(links)
        prev, cur, total = None, start, Fraction(1)
        while True:
            if prev is None:
                nxt, tri = links[cur][0]
            else:
                nxt, tri = next((y, c) for y, c in links[cur] if y != prev)
            total *= gf(tri, cur, nxt)
            prev, cur = cur, nxt
            if cur == start:
                break
        out.append((face.key, total))
    return out


def prism_cycle_identities(census: Census, normals: Normals | None = None) -> list[dict]:
    """gamma(XX', XY, YZ, XX') through an apex A of a pyramid-over-prism
    parent, together with the chain gamma(XX', XA, AZ, XX')."""
    normals = voronoi_normals(census.lattice) if normals is None else normals
    gf = _default_gain_fn(normals)
    d = census.dim
    out = []
    for entry in census.entries.get(3, []):
        if entry.cell.tag is not CellTag.TRIANGULAR_PRISM:
            continue
        prism = set(entry.cell.points)
        split = next(((b, t) for b, t in _prism_split(entry.cell.points)
                      if len(b) == 3), None)
        if split is None:
            continue
        (x, y, z), shift = split
        xp, zp = (tuple(a + b for a, b in zip(p, shift)) for p in (x, z))
        for e in (census.cell.face(ci) for ci in census.cell.children[entry.face.index]):
            de = census.dual_of(e)
            if de.tag is not CellTag.PYRAMID_OVER_TRIANGULAR_PRISM:
                continue
            apex = next(p for p in de.points if p not in prism)
            xx = _sub(xp, x)
            g1 = extended_gain((xp, x), (x, y), apex, gain_fn=gf)
            g2 = gf((x, y, z), _sub(y, x), _sub(z, y))
            g3 = extended_gain((y, z), (z, zp), apex, gain_fn=gf)
            chain = (gf((apex, x, xp), xx, _sub(apex, x))
                     * gf((apex, x, z), _sub(apex, x), _sub(z, apex))
                     * gf((apex, z, zp), _sub(z, apex), _sub(zp, z)))
            out.append({"face": entry.face.key, "apex": apex, "edge": e.key,
                        "cycle": g1 * g2 * g3, "chain": chain})
    return out
