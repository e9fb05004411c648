"""Replay of the five-dimensional case dispatch on a concrete Voronoi cell.

The auditor checks conclusions, not proofs: for every prismatic dual
3-cell it records the structure that the case analysis predicts and then
verifies on the instance that the predicted way out (decomposition, a free
direction, or a canonical scaling) really exists.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .dual import Census, CellTag, _prism_split
from .free import (FreeEdge, edge_direction, enumerate_free_edges,
                   is_free_triangle_criterion, add_segment, default_length,
                   subspace_certificate)
from .lattice import Lattice, _parity_bits
from .polytope import Face
from .scaling import (Coherence, ScalingState, coherence_check, construct_scaling,
                      verify_scaling)
from .venkov import build_red_graph, is_decomposable

__all__ = [
    "Verdict",
    "Case",
    "PrismSite",
    "AuditReport",
    "AuditContext",
    "find_prism_sites",
    "check_triangle_lemma",
    "classify_edge_cells",
    "dispatch_case",
    "audit",
]


class Verdict(str, enum.Enum):
    SCALING = "ScalingConstructed"
    FREE = "FreeDirectionReduced"
    DECOMPOSED = "Decomposed"
    FALSIFICATION = "FalsificationCandidate"


class Case(str, enum.Enum):
    PRPRPR = "PrPrPr"
    PRPRPY = "PrPrPy"
    PRPYPY = "PrPyPy"
    PYPYPY = "PyPyPy"
    ESCAPE = "Escape"


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass
class EdgeCell:
    edge: tuple  # face key
    tag: str
    extra: tuple  # points outside the site prism
    expected_shape: bool


@dataclass
class PrismSite:
    face: Face
    prism: tuple  # (X, Y, Z, X', Y', Z')
    shift: tuple  # X' - X
    is_triangle: bool
    edge_cells: list[EdgeCell] = field(default_factory=list)
    pr_count: int | None = None
    case: Case | None = None
    abc_ok: bool | None = None
    blocked_classes_ok: bool | None = None
    triangle_lemma: dict = field(default_factory=dict)
    conclusion: dict = field(default_factory=dict)
    normalized: dict | None = None

    @property
    def key(self) -> tuple:
        return self.face.key


@dataclass
class AuditReport:
    lattice: str
    verdict: Verdict
    decomposable: bool
    components: list
    ordine_regime: bool
    cube_checks: list = field(default_factory=list)
    sites: list[PrismSite] = field(default_factory=list)
    free_directions: list = field(default_factory=list)
    scaling_ok: bool = False
    incoherent_parallelograms: int = 0
    falsifications: list = field(default_factory=list)


class AuditContext:
    """Lazily computed global facts shared by the site checks."""

    def __init__(self, census: Census):
        self.census = census
        self._free: list[FreeEdge] | None = None
        self._decomp = None
        self._scaling = None

    @property
    def free(self) -> list[FreeEdge]:
        if self._free is None:
            self._free = [f for f in enumerate_free_edges(self.census) if f.mv_pass]
        return self._free

    @property
    def decomposition(self):
        if self._decomp is None:
            self._decomp = is_decomposable(build_red_graph(self.census))
        return self._decomp

    @property
    def scaling(self):
        if self._scaling is None:
            s = construct_scaling(self.census)
            ok = isinstance(s, ScalingState) and verify_scaling(self.census, s).passed
            self._scaling = (s, ok)
        return self._scaling

    def direction_free(self, v) -> bool:
        ok, _ = is_free_triangle_criterion(self.census, v)
        if not ok:
            return False
        return add_segment(self.census.cell, v, default_length(self.census, v)).passed


# --------------------------------------------------------------------------


def find_prism_sites(census: Census) -> list[PrismSite]:
    if census.dim != 5:
        raise ValueError("prism sites are audited for five-dimensional cells only")
    sites = []
    for entry in census.entries.get(3, []):
        if entry.cell.tag is not CellTag.TRIANGULAR_PRISM:
            continue
        bottom, shift = next((b, t) for b, t in _prism_split(entry.cell.points) if len(b) == 3)
        x, y, z = bottom
        prism = (x, y, z, _add(x, shift), _add(y, shift), _add(z, shift))
        sites.append(PrismSite(entry.face, prism, shift, len(entry.face.vertices) == 3))
    return sites


def check_triangle_lemma(site: PrismSite, ctx: AuditContext) -> dict:
    """Either the face is a triangle or P has a free direction."""
    if site.is_triangle:
        out = {"holds": True, "disjunct": "triangle"}
    elif ctx.free:
        out = {"holds": True, "disjunct": "free_direction",
               "witness": [str(x) for x in ctx.free[0].direction]}
    else:
        out = {"holds": False, "disjunct": None}
    site.triangle_lemma = out
    return out


def classify_edge_cells(site: PrismSite, ctx: AuditContext) -> list[EdgeCell]:
    """Tag the dual 4-cells of the three edges and test the ABC parity identity."""
    census = ctx.census
    prism = set(site.prism)
    cells = []
    for ci in census.cell.children.get(site.face.index, []):
        e = census.cell.face(ci)
        de = census.dual_of(e)
        extra = tuple(p for p in de.points if p not in prism)
        if de.tag is CellTag.PRISM_OVER_TETRAHEDRON:
            expected = (len(extra) == 2 and prism <= set(de.points)
                        and _sub(extra[1], extra[0]) in (site.shift, tuple(-x for x in site.shift)))
        elif de.tag is CellTag.PYRAMID_OVER_TRIANGULAR_PRISM:
            expected = len(extra) == 1 and prism <= set(de.points)
        else:
            expected = False
        cells.append(EdgeCell(e.key, de.label, extra, expected))
    site.edge_cells = cells
    site.pr_count = sum(c.tag == CellTag.PRISM_OVER_TETRAHEDRON.value for c in cells)
    x, y, z, xp, yp, zp = site.prism
    blocked = {_parity_bits(_add(_add(x, y), z)), _parity_bits(_add(_add(xp, yp), zp))}
    site.blocked_classes_ok = all(_parity_bits(p) not in blocked
                                  for c in cells for p in c.extra)
    if len(cells) == 3 and all(c.extra for c in cells):
        site.abc_ok = all(_parity_bits(_add(_add(a, b), c)) in blocked
                          for a, b, c in itertools.product(*(c.extra for c in cells)))
        site.normalized = _normalize(site)
    else:
        site.abc_ok = False
    return cells


def _f2_solve(basis: list[int], target: int, d: int) -> int | None:
    """Coordinates of target in the F2 basis (as a bitmask), or None."""
    rows = [(b, 1 << i) for i, b in enumerate(basis)]
    reduced: list[tuple[int, int]] = []
    for v, tag in rows:
        for rv, rt in reduced:
            if v & (1 << (rv.bit_length() - 1)):
                v ^= rv
                tag ^= rt
        if not v:
            return None
        reduced.append((v, tag))
    coords = 0
    for rv, rt in reduced:
        if target & (1 << (rv.bit_length() - 1)):
            target ^= rv
            coords ^= rt
    return coords if target == 0 else None


def _normalize(site: PrismSite) -> dict | None:
    """Parity classes in coordinates with X=0, Y=e1, Z=e2, A=e3, B=e4, X'=e5."""
    x, y, z, xp, _, _ = site.prism
    a, b = site.edge_cells[0].extra[0], site.edge_cells[1].extra[0]
    px = _parity_bits(x)
    basis = [_parity_bits(p) ^ px for p in (y, z, a, b, xp)]
    named = {"X": x, "Y": y, "Z": z, "X'": xp, "Y'": site.prism[4], "Z'": site.prism[5]}
    for label, cell in zip("ABC", site.edge_cells):
        for k, p in enumerate(cell.extra):
            named[label + "'" * k] = p
    out = {}
    for name, p in named.items():
        c = _f2_solve(basis, _parity_bits(p) ^ px, 5)
        if c is None:
            return None
        out[name] = "[" + ",".join(str((c >> i) & 1) for i in range(5)) + "]"
    return out


def dispatch_case(site: PrismSite, ctx: AuditContext) -> dict:
    """Assign the case from pr(F) and verify its predicted conclusion."""
    if not site.is_triangle:
        site.case = Case.ESCAPE
        out = {"verified": bool(ctx.free), "disjunct": "free_direction"}
    elif not all(c.expected_shape for c in site.edge_cells) or not site.abc_ok:
        # outside the lemma's shapes a free direction is predicted
        site.case = Case.ESCAPE
        out = {"verified": bool(ctx.free), "disjunct": "free_direction"}
    else:
        site.case = [Case.PYPYPY, Case.PRPYPY, Case.PRPRPY, Case.PRPRPR][site.pr_count]
        if site.case is Case.PRPRPR:
            out = {"verified": ctx.decomposition.decomposable, "disjunct": "decomposable"}
        elif site.case is Case.PRPRPY:
            out = {"verified": bool(ctx.free), "disjunct": "free_direction"}
        elif site.case is Case.PRPYPY:
            sides = [edge_direction(ctx.census.cell, ctx.census.cell.face(ci))
                     for ci in ctx.census.cell.children[site.face.index]]
            free_sides = [s for s in sides if ctx.direction_free(s)]
            out = {"verified": bool(free_sides), "disjunct": "free_side",
                   "witness": [[str(x) for x in s] for s in free_sides]}
        else:
            _, ok = ctx.scaling
            if ok:
                out = {"verified": True, "disjunct": "scaling"}
            else:
                out = {"verified": bool(ctx.free), "disjunct": "free_direction"}
    site.conclusion = out
    return out


def _cube_checks(ctx: AuditContext) -> list[dict]:
    census = ctx.census
    out = []
    for entry in census.entries.get(3, []):
        if entry.cell.tag is not CellTag.CUBE:
            continue
        for ci in census.cell.children.get(entry.face.index, []):
            e = census.cell.face(ci)
            v = edge_direction(census.cell, e)
            cert = subspace_certificate(census, e)
            out.append({"face": entry.face.key, "edge": e.key,
                        "direction": [str(x) for x in v],
                        "free": ctx.direction_free(v),
                        "subspace_certificate": cert is not None})
    return out


def audit(lat: Lattice | Census, census: Census | None = None,
          free: list[FreeEdge] | None = None) -> AuditReport:
    """Run the five-dimensional case analysis; ``free`` reuses an earlier enumeration."""
    if isinstance(lat, Census):
        census, lat = lat, lat.lattice
    if lat.dim != 5:
        raise ValueError("the audit applies to five-dimensional lattices")
    census = census or Census(lat)
    ctx = AuditContext(census)
    if free is not None:
        ctx._free = [f for f in free if f.mv_pass]
    falsifications = []

    dec = ctx.decomposition
    tags3 = {e.cell.tag for e in census.entries.get(3, [])}
    ordine = tags3 <= {CellTag.TETRAHEDRON, CellTag.OCTAHEDRON,
                       CellTag.PYRAMID_OVER_PARALLELOGRAM}
    cubes = _cube_checks(ctx)
    for c in cubes:
        if not (c["free"] and c["subspace_certificate"]):
            falsifications.append({"check": "cube_edge_free", **c})

    sites = find_prism_sites(census)
    for site in sites:
        tl = check_triangle_lemma(site, ctx)
        if not tl["holds"]:
            falsifications.append({"check": "triangle_lemma", "face": site.key})
            continue
        if site.is_triangle:
            classify_edge_cells(site, ctx)
            if not site.blocked_classes_ok:
                falsifications.append({"check": "three_plus_one_on_edge_cells", "face": site.key})
        res = dispatch_case(site, ctx)
        if not res["verified"]:
            falsifications.append({"check": "case_conclusion", "face": site.key,
                                   "case": site.case.value, "edges": [
                                       (c.edge, c.tag, c.extra) for c in site.edge_cells]})

    incoherent = 0
    for entry in census.entries.get(2, []):
        if entry.cell.tag is CellTag.PARALLELOGRAM:
            if coherence_check(census, entry.face).status is Coherence.INCOHERENT:
                incoherent += 1

    s, scaling_ok = ctx.scaling
    if falsifications:
        verdict = Verdict.FALSIFICATION
    elif dec.decomposable:
        verdict = Verdict.DECOMPOSED
    elif cubes or any(site.case in (Case.ESCAPE, Case.PRPRPY, Case.PRPYPY) for site in sites):
        verdict = Verdict.FREE
    elif scaling_ok:
        verdict = Verdict.SCALING
    elif ctx.free:
        verdict = Verdict.FREE
    else:
        falsifications.append({"check": "no_conclusion"})
        verdict = Verdict.FALSIFICATION

    free_dirs = ctx._free if ctx._free is not None else []
    return AuditReport(lat.name, verdict, dec.decomposable, dec.components, ordine,
                       cubes, sites, free_dirs, scaling_ok, incoherent, falsifications)
