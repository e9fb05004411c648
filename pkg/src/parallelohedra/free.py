"""Free directions: the triangle criterion, midpoint-subspace certificates and
explicit Minkowski sums with a segment."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .dual import Census, CellTag, midpoint_set
from .polytope import (Face, FaceLatticePolytope, Facet, HPolytope, MVReport,
                       build_face_lattice, check_minkowski_venkov)

__all__ = [
    "FreeMethod",
    "FreeDirectionCertificate",
    "SumResult",
    "FreeEdge",
    "DegenerateSumError",
    "is_free_triangle_criterion",
    "replay_certificate",
    "subspace_certificate",
    "add_segment",
    "default_length",
    "edge_direction",
    "enumerate_free_edges",
]


class DegenerateSumError(RuntimeError):
    pass


class FreeMethod(str, enum.Enum):
    TRIANGLE = "TriangleCriterion"
    SUBSPACE = "SubspaceCertificate"


@dataclass(frozen=True)
class FreeDirectionCertificate:
    direction: tuple[Fraction, ...]
    method: FreeMethod
    # triangle criterion: (triangle points, chosen facet vector) per triangle
    # subspace certificate: the basis masks of the hyperplane
    witnesses: tuple = ()
    functional: int | None = None


def _triangles(census: Census) -> list[tuple]:
    return [c.points for c in census.cells(2) if c.tag is CellTag.TRIANGLE]


def is_free_triangle_criterion(census: Census, v: Sequence
                               ) -> tuple[bool, FreeDirectionCertificate | None]:
    """Every triangular dual 2-cell must have an edge whose facet contains v.

    The facet dual to the edge XY has normal G (Y - X); it is parallel to v
    iff (Y - X)^T G v = 0.  Triangles are tested up to translation.
    """
    v = tuple(la.as_fraction(x) for x in v)
    if not any(v):
        raise ValueError("direction must be non-zero")
    gv = la.matvec(census.lattice.gram, v)
    witnesses = []
    for pts in _triangles(census):
        chosen = None
        for i, j in ((0, 1), (0, 2), (1, 2)):
            t = tuple(b - a for a, b in zip(pts[i], pts[j]))
            if la.dot(t, gv) == 0:
                chosen = t
                break
        if chosen is None:
            return False, None
        witnesses.append((pts, chosen))
    return True, FreeDirectionCertificate(v, FreeMethod.TRIANGLE, tuple(witnesses))


def replay_certificate(census: Census, cert: FreeDirectionCertificate) -> bool:
    """Re-run the check recorded in a certificate against its stored data."""
    if cert.method is FreeMethod.TRIANGLE:
        gv = la.matvec(census.lattice.gram, cert.direction)
        stored = {pts: t for pts, t in cert.witnesses}
        if set(stored) != set(_triangles(census)):
            return False
        for pts, t in stored.items():
            diffs = {tuple(b - a for a, b in zip(pts[i], pts[j]))
                     for i, j in ((0, 1), (0, 2), (1, 2))}
            if t not in diffs or la.dot(t, gv) != 0:
                return False
        return True
    return _hyperplane_ok(census, cert.witnesses[0], cert.functional)


def _parity_dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def _functionals(d: int) -> list[int]:
    # lexicographic order on (f_1, ..., f_d), f_1 most significant
    def bits(f):
        return tuple((f >> i) & 1 for i in range(d))
    return sorted(range(1, 1 << d), key=bits)


def _hyperplane_ok(census: Census, edge_points, f: int) -> bool:
    d = census.dim
    mids = midpoint_set(list(edge_points)).masks
    contact = census.nonfacet_contact_classes
    return all(c in mids or c in contact
               for c in range(1 << d) if not _parity_dot(c, f))


def subspace_certificate(census: Census, edge: Face) -> FreeDirectionCertificate | None:
    """First hyperplane of the half-lattice space covered by the edge's
    midpoint set together with non-facet contact classes."""
    if edge.dim != 1:
        raise ValueError("subspace certificates are defined for edges")
    d = census.dim
    cell = census.dual_of(edge)
    mids = midpoint_set(cell).masks
    contact = census.nonfacet_contact_classes
    for f in _functionals(d):
        if all(c in mids or c in contact for c in range(1 << d) if not _parity_dot(c, f)):
            basis = [c for c in range(1 << d) if not _parity_dot(c, f)]
            return FreeDirectionCertificate(edge_direction(census.cell, edge),
                                            FreeMethod.SUBSPACE, (cell.points, tuple(basis)), f)
    return None


# --------------------------------------------------------------------------
# Minkowski sum with a segment


@dataclass
class SumResult:
    polytope: FaceLatticePolytope
    mv: MVReport
    segment: tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return self.mv.passed


def default_length(census_or_lattice, v: Sequence) -> Fraction:
    """Largest 2^-k with ||l v|| <= half the shortest facet vector length."""
    lat = getattr(census_or_lattice, "lattice", census_or_lattice)
    v = [la.as_fraction(x) for x in v]
    shortest = min(lat.norm(t) for t in lat.relevant)
    nv = lat.norm(v)
    length = Fraction(1)
    while length * length * nv * 4 > shortest:
        length /= 2
    while (2 * length) ** 2 * nv * 4 <= shortest:
        length *= 2
    return length


def add_segment(cell: FaceLatticePolytope, v: Sequence, length=None) -> SumResult:
    """Exact P + [-(length/2) v, (length/2) v] with its Minkowski-Venkov verdict.

    Every facet of P survives, pushed out by |<n, w>|; each ridge whose two
    facet normals see w with opposite signs spawns the zone facet R + I.
    """
    v = tuple(la.as_fraction(x) for x in v)
    if not any(v):
        raise ValueError("direction must be non-zero")
    length = Fraction(1) if length is None else la.as_fraction(length)
    if length <= 0:
        raise ValueError("length must be positive")
    w = tuple(length / 2 * x for x in v)
    facets = [Facet(f.normal, f.offset + abs(la.dot(f.normal, w))) for f in cell.facets]
    for r in cell.faces_of_codim(2):
        j1, j2 = sorted(r.facets)[:2]
        n1, n2 = cell.facets[j1].normal, cell.facets[j2].normal
        a1, a2 = la.dot(n1, w), la.dot(n2, w)
        if a1 * a2 >= 0:
            continue
        if a1 < 0:
            a1, a2, n1, n2 = a2, a1, n2, n1
        n = tuple(a1 * y - a2 * x for x, y in zip(n1, n2))  # positive combination
        g = cell.vertices[r.vertices[0]]
        facets.append(Facet(n, la.dot(n, g)))
    poly = build_face_lattice(HPolytope(cell.dim, tuple(facets)))
    if len(poly.facets) < cell.dim + 1:
        raise DegenerateSumError("Minkowski sum lost full dimension")
    return SumResult(poly, check_minkowski_venkov(poly), w)


# --------------------------------------------------------------------------
# enumeration over edge directions


def edge_direction(cell: FaceLatticePolytope, edge: Face) -> tuple[Fraction, ...]:
    a, b = (cell.int_vertices[k] for k in edge.vertices)
    return tuple(Fraction(x) for x in la.sign_normalized(la.primitive(
        [y - x for x, y in zip(a, b)])))


@dataclass
class FreeEdge:
    direction: tuple[Fraction, ...]
    certificate: FreeDirectionCertificate
    mv_pass: bool
    lengths: tuple[Fraction, ...] = ()
    edges: list[int] = field(default_factory=list)


def enumerate_free_edges(census: Census, verify: bool = True,
                         lengths: Sequence | None = None) -> list[FreeEdge]:
    """Edge directions of P that pass the triangle criterion.

    With ``verify`` each hit is re-checked by an explicit Minkowski sum at
    each of ``lengths`` (default: the default length and twice it).
    """
    cell = census.cell
    by_dir: dict[tuple, list[int]] = {}
    for e in cell.faces_of_codim(cell.dim - 1):
        by_dir.setdefault(edge_direction(cell, e), []).append(e.index)
    out = []
    for direction in sorted(by_dir):
        ok, cert = is_free_triangle_criterion(census, direction)
        if not ok:
            continue
        ls: tuple = ()
        mv_ok = True
        if verify:
            base = default_length(census, direction)
            ls = tuple(la.as_fraction(x) for x in lengths) if lengths else (base, 2 * base)
            mv_ok = all(add_segment(cell, direction, ln).passed for ln in ls)
        out.append(FreeEdge(direction, cert, mv_ok, ls, by_dir[direction]))
    return out
