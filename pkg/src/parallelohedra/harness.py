"""Analysis pipeline and the brute-force oracle runners.

``analyze`` runs the requested checks in dependency order and collects a
JSON-ready :class:`AnalysisReport`.  The oracles deliberately avoid the
fast code paths (Fincke-Pohst, double description) so that they can be
used to cross-check them.
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from . import _linalg as la
from .dual import (
    Census,
    dimension_conjecture_check,
    verify_cell_lemmas,
    verify_complex_structure,
)
from .free import enumerate_free_edges, is_free_triangle_criterion, subspace_certificate
from .io import AnalysisReport, InputError, LatticeSpec, PolytopeSpec, render
from .lattice import Lattice, _parity_bits
from .polytope import (
    FaceLatticePolytope,
    check_minkowski_venkov,
    polytope_from_halfspaces,
    voronoi_cell,
)
from .scaling import (
    QuadraticFormCertificate,
    ScalingState,
    construct_scaling,
    fan_cycle_gains,
    reconstruct_quadratic_form,
    verify_scaling,
)
from .venkov import build_red_graph, is_decomposable

__all__ = [
    "CHECKS",
    "analyze",
    "resolve_input",
    "box_points",
    "oracle_relevant_vectors",
    "oracle_vertices",
    "oracle_f_vector",
    "oracle_dual_cells",
]

CHECKS = ("mv", "census", "lemmas", "free", "venkov", "scaling", "audit5d")


def resolve_input(source: str) -> LatticeSpec | PolytopeSpec:
    """A file path, or ``catalog:NAME`` for a built-in lattice."""
    from .catalog import get
    from .io import load_input

    if source.startswith("catalog:"):
        try:
            return get(source[len("catalog:"):])
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    return load_input(source)


def _parse_checks(checks: Iterable[str] | str | None) -> list[str]:
    if checks is None:
        return list(CHECKS)
    if isinstance(checks, str):
        checks = [c for c in checks.split(",") if c.strip()]
    wanted = {c.strip() for c in checks}
    unknown = wanted - set(CHECKS)
    if unknown:
        raise InputError(f"unknown check(s): {', '.join(sorted(unknown))}; "
                         f"choose from {', '.join(CHECKS)}")
    return [c for c in CHECKS if c in wanted]


# --------------------------------------------------------------------------
# per-check runners; each returns (result dict, list of failure strings)


def _mv(cell: FaceLatticePolytope):
    rep = check_minkowski_venkov(cell)
    res = {"passed": rep.passed, "conditions": {str(k): v for k, v in rep.conditions.items()},
           "witness": rep.witness, "codim2_projections": rep.polygon_counts}
    fails = [] if rep.passed else [f"mv: condition {rep.witness['condition']} fails"]
    return res, fails


def _census(census: Census):
    counts = census.tag_counts()
    res = {"tag_counts": {str(k): v for k, v in counts.items()},
           "classes": {str(k): len(es) for k, es in sorted(census.entries.items())},
           "neighbours": len(census.neighbours)}
    fails = []
    for k, c in counts.items():
        bad = sorted(t for t in c if t.startswith("Unclassified"))
        if bad and k <= 3:
            fails.append(f"census: unclassified dual {k}-cells {bad}")
    return res, fails


def _summary(rep) -> dict:
    return {name: {"checked": rep.checked.get(name, 0),
                   "violations": len(rep.violations.get(name, [])),
                   "first_witness": (rep.violations.get(name) or [None])[0]}
            for name in sorted(set(rep.checked) | set(rep.violations))}


def _lemmas(census: Census):
    cells = census.cells()
    reports = {"cell_lemmas": verify_cell_lemmas(census.lattice, cells),
               "dimension": dimension_conjecture_check(cells),
               "complex": verify_complex_structure(census)}
    res = {k: {"passed": r.passed, "lemmas": _summary(r)} for k, r in reports.items()}
    fails = [f"lemmas: {k}/{name} violated"
             for k, r in reports.items() for name, v in sorted(r.violations.items()) if v]
    return res, fails


def _free(census: Census):
    free = enumerate_free_edges(census)
    found = {fe.direction for fe in free}
    certs, misses = 0, []
    for e in census.cell.faces_of_codim(census.dim - 1):
        cert = subspace_certificate(census, e)
        if cert is None:
            continue
        certs += 1
        if cert.direction not in found and not is_free_triangle_criterion(census, cert.direction)[0]:
            misses.append(list(e.key))
    res = {"directions": [{"direction": list(fe.direction), "edges": len(fe.edges),
                           "mv_pass": fe.mv_pass, "lengths": list(fe.lengths)}
                          for fe in free],
           "count": len(free), "subspace_certificates": certs,
           "certificate_without_triangle": misses}
    fails = [f"free: segment sum along {render(list(fe.direction))} fails MV"
             for fe in free if not fe.mv_pass]
    if misses:
        fails.append(f"free: {len(misses)} subspace certificate(s) not confirmed")
    return res, fails, free


def _venkov(census: Census):
    g = build_red_graph(census)
    dec = is_decomposable(g)
    res = {"nodes": len(g.nodes), "edges": len(g.edges), "connected": g.connected,
           "components": [len(c) for c in g.components], "decomposable": dec.decomposable,
           "ranks": dec.ranks}
    return res, []


def _scaling(census: Census):
    lat = census.lattice
    s = construct_scaling(census)
    if not isinstance(s, ScalingState):
        return ({"constructed": False, "cycle": s.cycle, "gain": s.gain},
                ["scaling: gain cycle with product != 1"])
    rep = verify_scaling(census, s)
    q = reconstruct_quadratic_form(lat, s, cell=census.cell)
    fans = fan_cycle_gains(census)
    res = {"constructed": True, "verified": rep.passed, "faces_checked": rep.checked,
           "values": {k: v for k, v in sorted(s.class_values.items())},
           "fan_cycles": len(fans), "fan_cycles_trivial": all(g == 1 for _, g in fans)}
    fails = []
    if not rep.passed:
        fails.append("scaling: verification failed")
    if isinstance(q, QuadraticFormCertificate):
        c = q.proportional_to(lat.gram)
        res["q"] = q.q
        res["q_over_gram"] = c
        if c is None:
            fails.append("scaling: reconstructed form is not proportional to the Gram matrix")
    else:
        res["q_failure"] = {"reason": q.reason, "facets": [list(t) for t in q.facets]}
        fails.append(f"scaling: {q.reason}")
    if not res["fan_cycles_trivial"]:
        fails.append("scaling: nontrivial fan cycle gain")
    return res, fails


def _audit(census: Census, free):
    from .audit import Verdict, audit

    rep = audit(census, free=free)
    cases: dict[str, int] = {}
    for site in rep.sites:
        if site.case is not None:
            cases[site.case.value] = cases.get(site.case.value, 0) + 1
    res = {"verdict": rep.verdict, "decomposable": rep.decomposable,
           "ordine_regime": rep.ordine_regime, "cube_edges": len(rep.cube_checks),
           "prism_sites": len(rep.sites), "cases": dict(sorted(cases.items())),
           "abc_ok": all(s.abc_ok is not False for s in rep.sites),
           "triangle_lemma_ok": all(s.triangle_lemma["holds"] for s in rep.sites),
           "scaling_ok": rep.scaling_ok,
           "incoherent_parallelograms": rep.incoherent_parallelograms,
           "falsifications": rep.falsifications}
    fails = (["audit5d: FalsificationCandidate"] if rep.verdict is Verdict.FALSIFICATION else [])
    return res, fails


def analyze(spec: LatticeSpec | PolytopeSpec, checks: Iterable[str] | str | None = None
            ) -> AnalysisReport:
    """Run the selected checks; exit code 0 iff none failed."""
    selected = _parse_checks(checks)
    report = AnalysisReport(spec.to_dict(), selected)
    t0 = time.perf_counter()

    def clock(name: str, start: float) -> None:
        report.timings[name] = int(round((time.perf_counter() - start) * 1000))

    if isinstance(spec, PolytopeSpec):
        start = time.perf_counter()
        try:
            cell = polytope_from_halfspaces(spec.a, spec.b)
        except ValueError as exc:
            raise InputError(f"halfspaces: {exc}") from exc
        report.results["f_vector"] = list(cell.f_vector)
        skipped = [c for c in selected if c != "mv"]
        if "mv" in selected:
            res, fails = _mv(cell)
            report.results["mv"] = res
            report.failures += fails
        if skipped:
            report.results["skipped"] = {c: "requires a lattice input" for c in skipped}
        clock("mv", start)
        clock("total", t0)
        return report

    lat = spec.to_lattice()
    start = time.perf_counter()
    cell = voronoi_cell(lat)
    report.results["f_vector"] = list(cell.f_vector)
    report.results["relevant_vectors"] = len(lat.relevant)
    clock("cell", start)

    census = None
    free = None
    for name in selected:
        start = time.perf_counter()
        if name == "mv":
            res, fails = _mv(cell)
        else:
            if census is None:
                census = Census(lat, cell)
            if name == "census":
                res, fails = _census(census)
            elif name == "lemmas":
                res, fails = _lemmas(census)
            elif name == "free":
                res, fails, free = _free(census)
            elif name == "venkov":
                res, fails = _venkov(census)
            elif name == "scaling":
                res, fails = _scaling(census)
            elif lat.dim != 5:
                res, fails = {"skipped": "the audit applies to dimension 5"}, []
            else:
                res, fails = _audit(census, free)
        report.results[name] = res
        report.failures += fails
        clock(name, start)
    clock("total", t0)
    return report


# --------------------------------------------------------------------------
# oracles


def _box(lat: Lattice, center: Sequence[Fraction], r2: Fraction) -> list[range]:
    # |x_i - c_i|^2 <= r^2 (G^-1)_ii for every x in the ball
    ginv = la.inverse(lat.gram)
    out = []
    for i in range(lat.dim):
        b = r2 * ginv[i][i]
        # smallest integer w with w^2 >= b, so the box is never too small
        w = isqrt(b.numerator // b.denominator)
        while w * w < b:
            w += 1
        c = center[i]
        lo = -((w - c).__floor__())  # ceil(c - w)
        out.append(range(lo, (c + w).__floor__() + 1))
    return out


def box_points(lat: Lattice, center: Sequence, radius_sq) -> list[tuple[int, ...]]:
    """Lattice points within the ball, by scanning a bounding box."""
    c = [la.as_fraction(x) for x in center]
    r2 = la.as_fraction(radius_sq)
    if r2 < 0:
        raise ValueError("radius_sq must be non-negative")
    # integer form: y = den (x - c), compare y^T (s G) y with s den^2 r2
    den = la.common_denominator(c)
    s = la.common_denominator(x for row in lat.gram for x in row)
    g = [[int(x * s) for x in row] for row in lat.gram]
    cc = [int(x * den) for x in c]
    limit = s * den * den * r2
    d = lat.dim
    out = []
    for x in itertools.product(*_box(lat, c, r2)):
        y = [den * xi - ci for xi, ci in zip(x, cc)]
        q = sum(y[i] * g[i][j] * y[j] for i in range(d) for j in range(d))
        if q <= limit:
            out.append(tuple(x))
    return out


def oracle_relevant_vectors(lat: Lattice) -> list[tuple[int, ...]]:
    """Relevant vectors from coset minima found by box enumeration."""
    d = lat.dim
    # each coset has a representative with entries in {-1, 0, 1}
    bound: dict[int, Fraction] = {}
    for x in itertools.product((-1, 0, 1), repeat=d):
        b = _parity_bits(x)
        n = lat.norm(x)
        bound[b] = min(n, bound.get(b, n))
    radius = max(bound.values())
    best: dict[int, tuple[Fraction, list]] = {}
    for x in box_points(lat, (0,) * d, radius):
        b = _parity_bits(x)
        if b == 0:
            continue
        n = lat.norm(x)
        cur = best.get(b)
        if cur is None or n < cur[0]:
            best[b] = (n, [x])
        elif n == cur[0]:
            cur[1].append(x)
    return sorted(v for _, vs in best.values() if len(vs) == 2 for v in vs)


def oracle_vertices(cell_or_lattice) -> list[tuple[Fraction, ...]]:
    """Vertices from every d-subset of facet hyperplanes, filtered for feasibility."""
    if isinstance(cell_or_lattice, Lattice):
        from .polytope import build_voronoi_cell

        facets = build_voronoi_cell(cell_or_lattice).facets
    else:
        facets = cell_or_lattice.facets
    d = len(facets[0].normal)
    found = set()
    for sub in itertools.combinations(facets, d):
        m = [list(f.normal) for f in sub]
        if la.det(m) == 0:
            continue
        x = la.solve(m, [f.offset for f in sub])
        if all(la.dot(f.normal, x) <= f.offset for f in facets):
            found.add(tuple(x))
    return sorted(found)


def oracle_f_vector(cell_or_lattice) -> tuple[int, ...]:
    """Face counts from intersections of facet vertex sets, closed under meets."""
    if isinstance(cell_or_lattice, Lattice):
        from .polytope import build_voronoi_cell

        facets = build_voronoi_cell(cell_or_lattice).facets
    else:
        facets = cell_or_lattice.facets
    verts = oracle_vertices(cell_or_lattice)
    d = len(verts[0])
    sets = {frozenset(k for k, v in enumerate(verts) if la.dot(f.normal, v) == f.offset)
            for f in facets}
    faces = {s for s in sets if s}
    frontier = set(faces)
    while frontier:
        new = {a & b for a in frontier for b in sets} - faces - {frozenset()}
        faces |= new
        frontier = new
    counts = [0] * d
    for s in faces:
        pts = [verts[k] for k in sorted(s)]
        k = la.rank([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) if len(pts) > 1 else 0
        if k < d:
            counts[k] += 1
    return tuple(counts)


def oracle_dual_cells(lat: Lattice, vertices: Sequence[Sequence] | None = None
                      ) -> dict[tuple, list[tuple[int, ...]]]:
    """Lattice points at minimal distance from each vertex of the Voronoi cell."""
    if vertices is None:
        vertices = oracle_vertices(lat)
    out = {}
    for v in vertices:
        v = tuple(la.as_fraction(x) for x in v)
        out[v] = box_points(lat, v, lat.norm(v))
    return out
