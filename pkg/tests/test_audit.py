import dataclasses

import pytest

from parallelohedra import Case, Verdict, get
from parallelohedra.audit import (
    AuditContext,
    check_triangle_lemma,
    classify_edge_cells,
    find_prism_sites,
)
from parallelohedra.dual import CellTag


def test_sites_require_5d(census):
    with pytest.raises(ValueError):
        find_prism_sites(census("A2+Z"))


def test_z5_no_sites_and_decomposed(census, audited):
    assert find_prism_sites(census("Z5")) == []
    rep = audited("Z5")
    assert rep.verdict is Verdict.DECOMPOSED
    assert len(rep.components) == 5


def test_d5(census, audited):
    # frozen from the exhaustive census: D5 has tetrahedral 3-cells only
    assert find_prism_sites(census("D5")) == []
    rep = audited("D5")
    assert rep.ordine_regime and rep.verdict is Verdict.SCALING and rep.scaling_ok


def test_a2_z3_square_sites(census, audited):
    c = census("A2+Z3")
    sites = find_prism_sites(c)
    assert sites
    for s in sites:
        assert s.face.dim == 2 and not s.is_triangle
        # product face: a hexagon edge times a unit segment, a square
        assert len(s.face.vertices) == 4
    rep = audited("A2+Z3")
    for s in rep.sites:
        assert s.triangle_lemma["disjunct"] == "free_direction"
        assert s.triangle_lemma["witness"] == ["0", "0", "0", "0", "1"]


def test_triangle_sites_and_edge_cells(census):
    c = census("Q5b")
    ctx = AuditContext(c)
    sites = [s for s in find_prism_sites(c) if s.is_triangle]
    assert sites
    for s in sites:
        assert check_triangle_lemma(s, ctx) == {"holds": True, "disjunct": "triangle"}
        cells = classify_edge_cells(s, ctx)
        assert len(cells) == 3
        for ec in cells:
            assert ec.expected_shape
            if ec.tag == CellTag.PYRAMID_OVER_TRIANGULAR_PRISM.value:
                assert len(ec.extra) == 1
            else:
                a, a2 = ec.extra
                assert tuple(q - p for p, q in zip(a, a2)) in (s.shift, tuple(-x for x in s.shift))
        assert s.abc_ok and s.blocked_classes_ok


def test_pr_count_invariant_under_relabeling(census):
    c = census("Q5b")
    ctx = AuditContext(c)
    for s in (s for s in find_prism_sites(c) if s.is_triangle):
        classify_edge_cells(s, ctx)
        x, y, z, xp, yp, zp = s.prism
        t = dataclasses.replace(s, prism=(z, x, y, zp, xp, yp), edge_cells=[])
        classify_edge_cells(t, ctx)
        assert (t.pr_count, t.abc_ok) == (s.pr_count, s.abc_ok)


def test_prprpr_decomposable(audited):
    rep = audited("Z+D4")
    pr = [s for s in rep.sites if s.case is Case.PRPRPR]
    assert pr and rep.decomposable and rep.verdict is Verdict.DECOMPOSED
    for s in pr:
        assert s.conclusion == {"verified": True, "disjunct": "decomposable"}
        n = s.normalized
        assert (n["X"], n["Y"], n["Z"], n["X'"]) == (
            "[0,0,0,0,0]", "[1,0,0,0,0]", "[0,1,0,0,0]", "[0,0,0,0,1]")
        assert (n["A"], n["B"]) == ("[0,0,1,0,0]", "[0,0,0,1,0]")
        assert n["C"] in ("[1,1,1,1,0]", "[1,1,1,1,1]")


def test_pypypy_scaling(audited):
    rep = audited("Q5a")
    py = [s for s in rep.sites if s.case is Case.PYPYPY]
    assert py and all(s.conclusion["disjunct"] == "scaling" for s in py)
    assert rep.verdict is Verdict.SCALING


def test_prpypy_free_side(audited):
    rep = audited("Q5b")
    sites = [s for s in rep.sites if s.case is Case.PRPYPY]
    assert sites and all(s.conclusion["verified"] and s.conclusion["witness"] for s in sites)
    assert rep.verdict is Verdict.FREE


def test_two_a2_factors(audited):
    assert audited("A2+A2+Z").verdict in (Verdict.FREE, Verdict.DECOMPOSED)


def test_audit_rejects_other_dimensions():
    from parallelohedra import audit

    with pytest.raises(ValueError):
        audit(get("A3").to_lattice())
