"""Dual cells of the Voronoi tiling and their classification.

A point x of the lattice lies in the dual cell of a face F of the central
cell P iff F is contained in P + x.  Any such x satisfies x/2 in P, i.e.
x is a shortest vector of its coset x + 2L, so the candidates are the
finite "neighbour" set of all coset minima.  For a vertex v of P the test
is ||v - x|| = ||v||, which is linear in v: 2 <x, v> = <x, x>.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .lattice import HalfClass, Lattice, _parity_bits, points_in_ball
from .polytope import Face, FaceLatticePolytope, symmetry_center, voronoi_cell

__all__ = [
    "CellTag",
    "DualCell",
    "MidpointSet",
    "TilingFace",
    "Census",
    "DeloneClassificationError",
    "LemmaReport",
    "classify",
    "dual_cell",
    "midpoint_set",
    "is_contact_face",
    "verify_cell_lemmas",
    "dimension_conjecture_check",
]


class DeloneClassificationError(RuntimeError):
    """A dual cell of codimension <= 3 matched none of the known shapes."""


class CellTag(str, enum.Enum):
    SEGMENT = "Segment"
    TRIANGLE = "Triangle"
    PARALLELOGRAM = "Parallelogram"
    TETRAHEDRON = "Tetrahedron"
    OCTAHEDRON = "Octahedron"
    PYRAMID_OVER_PARALLELOGRAM = "PyramidOverParallelogram"
    TRIANGULAR_PRISM = "TriangularPrism"
    CUBE = "Cube"
    PRISM_OVER_TETRAHEDRON = "PrismOverTetrahedron"
    PYRAMID_OVER_TRIANGULAR_PRISM = "PyramidOverTriangularPrism"
    UNCLASSIFIED = "Unclassified"


Point = tuple  # integer coordinates in the lattice basis


@dataclass(frozen=True)
class DualCell:
    points: tuple[Point, ...]
    codim: int
    affine_dim: int
    tag: CellTag
    note: str = ""

    @property
    def label(self) -> str:
        if self.tag is CellTag.UNCLASSIFIED:
            return f"Unclassified({self.codim})"
        return self.tag.value

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def translate(self, x: Sequence[int]) -> "DualCell":
        pts = tuple(sorted(tuple(a + b for a, b in zip(p, x)) for p in self.points))
        return DualCell(pts, self.codim, self.affine_dim, self.tag, self.note)


@dataclass(frozen=True)
class MidpointSet:
    """Classes (X + Y)/2 + L for X, Y in a dual cell, as half-class masks."""

    dim: int
    masks: frozenset[int]

    @property
    def classes(self) -> frozenset[HalfClass]:
        return frozenset(HalfClass.from_mask(m, self.dim) for m in self.masks)

    def __contains__(self, item) -> bool:
        m = item.mask if isinstance(item, HalfClass) else int(item)
        return m in self.masks

    def __len__(self) -> int:
        return len(self.masks)


@dataclass(frozen=True)
class TilingFace:
    """Face ``cell_face`` of the translate P + ``translate``."""

    cell_face: Face
    translate: tuple[int, ...]
    canonical_rep: tuple[Fraction, ...]

    def point_set(self, cell: FaceLatticePolytope) -> frozenset:
        return frozenset(tuple(a + b for a, b in zip(cell.vertices[k], self.translate))
                         for k in self.cell_face.vertices)


# --------------------------------------------------------------------------
# affine helpers on integer point sets


def _affine_dim(points: Sequence[Point]) -> int:
    if len(points) <= 1:
        return len(points) - 1
    p0 = points[0]
    return la.rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def _is_centrally_symmetric(points: Iterable[Point]) -> bool:
    return symmetry_center(points) is not None


def _prism_split(points: Sequence[Point]):
    """All (bottom, shift) with points == bottom disjoint-union (bottom + shift)."""
    s = set(points)
    p = min(points)
    out = []
    for q in points:
        if q == p:
            continue
        t = tuple(a - b for a, b in zip(q, p))
        bottom = [x for x in points if tuple(a + b for a, b in zip(x, t)) in s]
        top = {tuple(a + b for a, b in zip(x, t)) for x in bottom}
        if len(bottom) * 2 == len(points) and not (top & set(bottom)) and top | set(bottom) == s:
            out.append((sorted(bottom), t))
    return out


def _is_parallelogram(points: Sequence[Point]) -> bool:
    return len(points) == 4 and _affine_dim(points) == 2 and _is_centrally_symmetric(points)


def _is_triangular_prism(points: Sequence[Point]) -> bool:
    if len(points) != 6 or _affine_dim(points) != 3 or _is_centrally_symmetric(points):
        return False
    return any(_affine_dim(b) == 2 for b, _ in _prism_split(points))


def _pyramid_apexes(points: Sequence[Point], base_test) -> list[Point]:
    d = _affine_dim(points)
    out = []
    for a in points:
        base = [p for p in points if p != a]
        if _affine_dim(base) == d - 1 and base_test(base):
            out.append(a)
    return out


def classify_points(points: Sequence[Point], codim: int) -> tuple[CellTag, str]:
    """Tag a point set of the given declared dimension (see ``classify``)."""
    pts = sorted(tuple(p) for p in points)
    n = len(pts)
    ad = _affine_dim(pts)
    tag = None
    note = ""
    if codim == 1:
        if n == 2:
            tag = CellTag.SEGMENT
    elif codim == 2:
        if n == 3 and ad == 2:
            tag = CellTag.TRIANGLE
        elif _is_parallelogram(pts):
            tag = CellTag.PARALLELOGRAM
    elif codim == 3 and ad == 3:
        if n == 4:
            tag = CellTag.TETRAHEDRON
        elif n == 5 and _pyramid_apexes(pts, _is_parallelogram):
            tag = CellTag.PYRAMID_OVER_PARALLELOGRAM
        elif n == 6 and _is_centrally_symmetric(pts):
            tag = CellTag.OCTAHEDRON
        elif n == 6 and _is_triangular_prism(pts):
            tag = CellTag.TRIANGULAR_PRISM
        elif n == 8 and _is_centrally_symmetric(pts) and any(
                _is_parallelogram(b) for b, _ in _prism_split(pts)):
            tag = CellTag.CUBE
    elif codim == 4 and ad == 4:
        if n == 8 and any(_affine_dim(b) == 3 and len(b) == 4 for b, _ in _prism_split(pts)):
            tag = CellTag.PRISM_OVER_TETRAHEDRON
        elif n == 7:
            apexes = _pyramid_apexes(pts, _is_triangular_prism)
            if len(apexes) == 1:
                tag = CellTag.PYRAMID_OVER_TRIANGULAR_PRISM
            elif len(apexes) > 1:
                note = f"ambiguous pyramid apex ({len(apexes)} candidates)"
    if tag is None:
        if codim <= 3:
            raise DeloneClassificationError(
                f"Delone classification violated: {n} points of affine dimension "
                f"{ad} in a dual {codim}-cell: {pts}")
        tag = CellTag.UNCLASSIFIED
    return tag, note


def classify(cell: DualCell) -> CellTag:
    return classify_points(cell.points, cell.codim)[0]


def make_dual_cell(points: Iterable[Point], codim: int) -> DualCell:
    pts = tuple(sorted(tuple(p) for p in points))
    tag, note = classify_points(pts, codim)
    return DualCell(pts, codim, _affine_dim(pts), tag, note)


def midpoint_set(cell: DualCell | Sequence[Point]) -> MidpointSet:
    pts = cell.points if isinstance(cell, DualCell) else [tuple(p) for p in cell]
    dim = len(pts[0])
    masks = {_parity_bits([a + b for a, b in zip(x, y)]) for x in pts for y in pts}
    return MidpointSet(dim, frozenset(masks))


def _center(points: Sequence[Point]) -> tuple[Fraction, ...] | None:
    return symmetry_center(points)


# --------------------------------------------------------------------------
# oracle-style single dual cell via ball enumeration


def dual_cell(lat: Lattice, face: TilingFace | Face, cell: FaceLatticePolytope,
              ) -> DualCell:
    """Dual cell of a tiling face by intersecting the Delone sets of its vertices.

    Each vertex v is handled with a ball enumeration around v of radius
    ||v - c||, c any tile center containing v.
    """
    if isinstance(face, Face):
        face = TilingFace(face, (0,) * cell.dim, cell.centroid(face))
    shift = face.translate
    common: set | None = None
    for k in face.cell_face.vertices:
        v = cell.vertices[k]
        r2 = lat.norm(v)
        center = tuple(a + b for a, b in zip(v, shift))
        pts = set(points_in_ball(lat, center, r2))
        common = pts if common is None else common & pts
    codim = cell.dim - face.cell_face.dim
    return make_dual_cell(sorted(common or ()), codim)


def is_contact_face(cell_or_points: DualCell | Sequence[Point]):
    """(True, center) when the dual cell is centrally symmetric, else (False, None)."""
    pts = cell_or_points.points if isinstance(cell_or_points, DualCell) else list(cell_or_points)
    c = _center(pts)
    return (c is not None), c


# --------------------------------------------------------------------------
# the census


@dataclass
class CensusEntry:
    face: Face
    cell: DualCell
    multiplicity: int  # number of faces of P in the translation class


class Census:
    """Dual cells of every face of P, plus translation-class representatives."""

    def __init__(self, lat: Lattice, cell: FaceLatticePolytope | None = None,
                 max_codim: int | None = None):
        self.lattice = lat
        self.cell = cell if cell is not None else voronoi_cell(lat)
        self.dim = lat.dim
        self.max_codim = self.dim if max_codim is None else max_codim
        minima = lat.coset_minima
        self.neighbours: list[Point] = sorted(v for _, vs in minima.values() for v in vs)
        self._nindex = {p: i for i, p in enumerate(self.neighbours)}
        self._vertex_masks = self._compute_vertex_masks()
        self._cells: dict[int, DualCell] = {}
        self.entries: dict[int, list[CensusEntry]] = {}
        self._build()

    def _compute_vertex_masks(self) -> list[int]:
        scale, g = self.lattice._int_gram
        vs = self.cell.int_vertices
        vscale = self.cell._scale
        norms = [sum(x * y for x, y in zip(p, (sum(g[i][j] * p[j] for j in range(self.dim))
                                                for i in range(self.dim))))
                 for p in self.neighbours]
        gp = [tuple(sum(g[i][j] * p[j] for j in range(self.dim)) for i in range(self.dim))
              for p in self.neighbours]
        masks = []
        for v in vs:
            m = 0
            for idx, (gx, nx) in enumerate(zip(gp, norms)):
                # 2 <x, v> == <x, x>, with v = V / vscale
                if 2 * sum(a * b for a, b in zip(gx, v)) == nx * vscale:
                    m |= 1 << idx
            masks.append(m)
        return masks

    def _points_of(self, mask: int) -> tuple[Point, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.neighbours[low.bit_length() - 1])
            mask ^= low
        return tuple(sorted(out))

    def dual_mask(self, face: Face) -> int:
        m = -1
        for k in face.vertices:
            m &= self._vertex_masks[k]
        return m

    def dual_of(self, face: Face) -> DualCell:
        """Dual cell of a face of the central cell P (contains the origin)."""
        cached = self._cells.get(face.index)
        if cached is None:
            pts = self._points_of(self.dual_mask(face))
            codim = self.dim - face.dim
            if codim > self.max_codim:
                cached = DualCell(pts, codim, _affine_dim(pts), CellTag.UNCLASSIFIED)
            else:
                cached = make_dual_cell(pts, codim)
            self._cells[face.index] = cached
        return cached

    def dual_cell(self, face: TilingFace) -> DualCell:
        return self.dual_of(face.cell_face).translate(face.translate)

    def tiling_face(self, face: Face, translate: Sequence[int] | None = None) -> TilingFace:
        t = tuple(translate) if translate is not None else (0,) * self.dim
        c = self.cell.centroid(face)
        return TilingFace(face, t, tuple(a + b for a, b in zip(c, t)))

    def _build(self) -> None:
        for k in range(1, self.dim + 1):
            classes: dict[tuple, list[Face]] = defaultdict(list)
            for f in self.cell.faces_of_codim(k):
                c = self.cell.centroid(f)
                classes[tuple(x - (x.numerator // x.denominator) for x in c)].append(f)
            entries = []
            for key in sorted(classes):
                faces = classes[key]
                rep = faces[0]
                entries.append(CensusEntry(rep, self.dual_of(rep), len(faces)))
            self.entries[k] = entries

    # -- summaries -----------------------------------------------------------

    def cells(self, codim: int | None = None) -> list[DualCell]:
        ks = [codim] if codim is not None else sorted(self.entries)
        return [e.cell for k in ks for e in self.entries.get(k, [])]

    def tag_counts(self) -> dict[int, dict[str, int]]:
        return {k: dict(sorted(Counter(e.cell.label for e in es).items()))
                for k, es in sorted(self.entries.items())}

    def faces_with_tag(self, tag: CellTag, codim: int | None = None,
                       representatives: bool = False) -> list[Face]:
        if representatives:
            return [e.face for k, es in self.entries.items() for e in es
                    if e.cell.tag is tag and (codim is None or k == codim)]
        ks = [codim] if codim is not None else range(1, self.dim + 1)
        return [f for k in ks for f in self.cell.faces_of_codim(k)
                if self.dual_of(f).tag is tag]

    @property
    def facet_classes(self) -> set[int]:
        """Half-class masks of facet centers (coset minimum unique up to sign)."""
        return {b for b, (_, vs) in self.lattice.coset_minima.items() if b and len(vs) == 2}

    @property
    def nonfacet_contact_classes(self) -> set[int]:
        return {b for b, (_, vs) in self.lattice.coset_minima.items() if b and len(vs) > 2}


# --------------------------------------------------------------------------
# the lemma suite


@dataclass
class LemmaReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def _count(self, name: str, n: int = 1) -> None:
        self.checked[name] = self.checked.get(name, 0) + n
        self.violations.setdefault(name, [])

    def _fail(self, name: str, witness) -> None:
        self.violations.setdefault(name, []).append(witness)


def _seg_classes(cells: Iterable[DualCell]) -> dict[int, set[Point]]:
    """Segment vectors (up to sign) occurring inside the given cells, by class."""
    out: dict[int, set[Point]] = defaultdict(set)
    for c in cells:
        for a, b in itertools.combinations(c.points, 2):
            v = tuple(y - x for x, y in zip(a, b))
            out[_parity_bits(v)].update({v, tuple(-x for x in v)})
    return out


def verify_cell_lemmas(lat: Lattice, cells: Sequence[DualCell],
                       segments_from: Sequence[DualCell] | None = None) -> LemmaReport:
    """Check the parity, translated-cell, translated-pair, midpoint and 3+1 lemmas.

    ``segments_from`` supplies the cells whose segments feed the
    translated-pair check (defaults to ``cells``).
    """
    rep = LemmaReport()
    minima = lat.coset_minima
    relevant = set(lat.relevant)
    segs = _seg_classes(segments_from if segments_from is not None else cells)
    for c in cells:
        pts = c.points
        s = set(pts)
        par = [_parity_bits(p) for p in pts]
        rep._count("parity")
        if len(set(par)) != len(par):
            dup = [p for p, b in zip(pts, par) if par.count(b) > 1]
            rep._fail("parity", {"cell": pts, "points": dup})
        for y, z in itertools.combinations(pts, 2):
            b = _parity_bits([a + b_ for a, b_ in zip(y, z)])
            if b == 0:
                continue
            ysum = tuple(a + b_ for a, b_ in zip(y, z))
            rep._count("translated_cell")
            for m in minima[b][1]:
                q = tuple((a + mm) // 2 for a, mm in zip(ysum, m))
                if q not in s:
                    rep._fail("translated_cell", {"cell": pts, "pair": (y, z), "missing": q})
                    break
            rep._count("translated_pair")
            for m in segs.get(b, ()):
                q = tuple((a + mm) // 2 for a, mm in zip(ysum, m))
                if q not in s:
                    rep._fail("translated_pair", {"cell": pts, "pair": (y, z), "segment": m})
                    break
            if len(minima[b][1]) == 2:
                rep._count("midpoints")
                t = minima[b][1][0]
                diff = tuple(b_ - a for a, b_ in zip(y, z))
                if diff != t and tuple(-x for x in diff) != t:
                    rep._fail("midpoints", {"cell": pts, "pair": (y, z), "facet_vector": t})
        pset = set(par)
        for k_, l_, m_ in itertools.combinations(pts, 3):
            if all(tuple(b - a for a, b in zip(u, v)) in relevant
                   for u, v in ((k_, l_), (l_, m_), (k_, m_))):
                rep._count("three_plus_one")
                target = _parity_bits([a + b + c_ for a, b, c_ in zip(k_, l_, m_)])
                if target in pset:
                    rep._fail("three_plus_one", {"cell": pts, "triangle": (k_, l_, m_)})
    return rep


def dimension_conjecture_check(cells: Iterable[DualCell]) -> LemmaReport:
    rep = LemmaReport()
    for c in cells:
        rep._count("dimension")
        if c.affine_dim != c.codim:
            rep._fail("dimension", {"cell": c.points, "codim": c.codim,
                                    "affine_dim": c.affine_dim})
    return rep


def verify_complex_structure(census: Census) -> LemmaReport:
    """Inclusion reversal over the face poset and the intersection lemma on all
    pairs of codimension-2 faces sharing a vertex."""
    rep = LemmaReport()
    cell = census.cell
    for f in cell.all_faces:
        if f.dim == cell.dim:
            continue
        df = set(census._points_of(census.dual_mask(f)))
        for ci in cell.children.get(f.index, []):
            rep._count("inclusion_reversal")
            dc = set(census._points_of(census.dual_mask(cell.face(ci))))
            if not df <= dc:
                rep._fail("inclusion_reversal", {"face": f.key, "child": cell.face(ci).key})
    faces = cell.faces_of_codim(2) if cell.dim >= 2 else []
    for a, b in itertools.combinations(faces, 2):
        if not a.mask & b.mask:
            continue
        rep._count("intersection")
        h = cell.join(a, b)
        lhs = census.dual_mask(h)
        rhs = census.dual_mask(a) & census.dual_mask(b)
        if lhs != rhs:
            rep._fail("intersection", {"faces": (a.key, b.key)})
    return rep
