from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parallelohedra import CellTag, Lattice, get, midpoint_set, voronoi_cell
from parallelohedra.catalog import catalog
from parallelohedra.dual import (
    Census,
    DeloneClassificationError,
    TilingFace,
    classify_points,
    dimension_conjecture_check,
    dual_cell,
    is_contact_face,
    make_dual_cell,
    verify_cell_lemmas,
    verify_complex_structure,
)
from parallelohedra.harness import box_points
from parallelohedra.lattice import HalfClass

F = Fraction
H = F(1, 2)


def _vertex(cell, point):
    k = cell.vertices.index(tuple(F(x) for x in point))
    return next(f for f in cell.faces[0] if f.vertices == (k,))


def test_z2_vertex_cell():
    lat = get("Z2").to_lattice()
    cell = voronoi_cell(lat)
    dc = dual_cell(lat, _vertex(cell, (H, H)), cell)
    assert dc.points == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert dc.tag is CellTag.PARALLELOGRAM


def test_a2_vertex_cells_are_delone_triangles():
    lat = get("A2").to_lattice()
    cell = voronoi_cell(lat)
    for v in cell.faces[0]:
        dc = dual_cell(lat, v, cell)
        x = cell.vertices[v.vertices[0]]
        assert list(dc.points) == box_points(lat, x, lat.norm(x))
        assert len(dc) == 3 and dc.tag is CellTag.TRIANGLE


def test_z3_vertex_cell_is_cube():
    lat = get("Z3").to_lattice()
    cell = voronoi_cell(lat)
    dc = dual_cell(lat, _vertex(cell, (H, H, H)), cell)
    assert dc.points == tuple((a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1))
    assert dc.tag is CellTag.CUBE


def test_fcc_vertex_cells():
    census = Census(get("D3").to_lattice())
    tags = {}
    for v in census.cell.faces[0]:
        dc = census.dual_of(v)
        tags.setdefault(len(dc), set()).add(dc.tag)
    assert tags == {4: {CellTag.TETRAHEDRON}, 6: {CellTag.OCTAHEDRON}}


def test_hexagonal_prism_vertex_is_triangular_prism():
    census = Census(get("A2+Z").to_lattice())
    assert {census.dual_of(v).tag for v in census.cell.faces[0]} == {CellTag.TRIANGULAR_PRISM}


def test_translated_tiling_face():
    lat = get("A2").to_lattice()
    cell = voronoi_cell(lat)
    census = Census(lat, cell)
    v = cell.faces[0][0]
    shift = (2, -1)
    tf = TilingFace(v, shift, tuple(a + b for a, b in zip(cell.centroid(v), shift)))
    assert dual_cell(lat, tf, cell) == census.dual_of(v).translate(shift)
    assert census.dual_cell(census.tiling_face(v, shift)) == census.dual_of(v).translate(shift)


@pytest.mark.parametrize("spec", [s for s in catalog() if s.dim <= 4], ids=lambda s: s.name)
def test_census_matches_ball_oracle(spec):
    lat = spec.to_lattice()
    census = Census(lat)
    for f in census.cell.all_faces:
        if f.dim < census.dim and f.dim <= 1:
            assert census.dual_of(f).points == dual_cell(lat, f, census.cell).points


def test_classify_synthetic_shapes():
    assert classify_points([(0, 0), (1, 0), (0, 1), (1, 1)], 2)[0] is CellTag.PARALLELOGRAM
    assert classify_points([(0, 0), (1, 0), (0, 1)], 2)[0] is CellTag.TRIANGLE
    tet = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]
    prism = tet + [(x, y, z, 1) for x, y, z, _ in tet]
    assert classify_points(prism, 4)[0] is CellTag.PRISM_OVER_TETRAHEDRON
    tri_prism = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 1, 0), (0, 1, 1, 0)]
    assert classify_points(tri_prism[:6], 3)[0] is CellTag.TRIANGULAR_PRISM
    pyr = tri_prism + [(0, 0, 0, 1)]
    assert classify_points(pyr, 4)[0] is CellTag.PYRAMID_OVER_TRIANGULAR_PRISM
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    assert classify_points(octa, 3)[0] is CellTag.OCTAHEDRON
    pyr3 = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)]
    assert classify_points(pyr3, 3)[0] is CellTag.PYRAMID_OVER_PARALLELOGRAM


def test_unclassified_low_codim_raises():
    with pytest.raises(DeloneClassificationError, match="Delone classification violated"):
        classify_points([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)], 2)


def test_unclassified_codim4_is_tagged():
    pts = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    cell = make_dual_cell(pts, 4)
    assert cell.tag is CellTag.UNCLASSIFIED and cell.label == "Unclassified(4)"


def test_midpoint_examples():
    assert midpoint_set([(0, 0), (1, 0)]).classes == {HalfClass((0, 0)), HalfClass((H, 0))}
    tri = midpoint_set([(0, 0), (1, 0), (1, 1)])
    assert tri.classes == {HalfClass((0, 0)), HalfClass((H, 0)), HalfClass((0, H)),
                           HalfClass((H, H))}
    cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    assert len(midpoint_set(cube)) == 8


def test_contact_face_examples():
    census = Census(get("D3").to_lattice())
    for f in census.cell.faces_of_codim(1):
        assert is_contact_face(census.dual_of(f))[0]
    assert is_contact_face([(0, 0), (1, 0), (0, 1), (1, 1)]) == (True, (H, H))
    assert not is_contact_face([(0, 0), (1, 0), (0, 1)])[0]
    by_tag = {}
    for name in ("D3", "Z3", "A3*", "A2+Z", "D5*"):
        for c in Census(get(name).to_lattice()).cells(3):
            by_tag.setdefault(c.tag, set()).add(is_contact_face(c)[0])
    assert by_tag[CellTag.OCTAHEDRON] == {True}
    assert by_tag[CellTag.CUBE] == {True}
    assert by_tag[CellTag.TETRAHEDRON] == {False}
    assert by_tag[CellTag.TRIANGULAR_PRISM] == {False}
    assert by_tag[CellTag.PYRAMID_OVER_PARALLELOGRAM] == {False}


def test_contact_centers_are_half_lattice_points():
    census = Census(get("A3").to_lattice())
    for c in census.cells():
        ok, center = is_contact_face(c)
        if ok:
            assert all((2 * x).denominator == 1 for x in center)


def test_lemmas_pass_z5(census):
    c = census("Z5")
    assert verify_cell_lemmas(c.lattice, c.cells()).passed
    assert dimension_conjecture_check(c.cells()).passed


@pytest.mark.parametrize("name", ["Z2", "A2", "A2*"])
def test_dimension_conjecture_2d(name, census):
    assert dimension_conjecture_check(census(name).cells()).passed


def test_injected_parity_duplicate_is_reported():
    lat = get("Z2").to_lattice()
    bad = make_dual_cell([(0, 0), (1, 1), (2, 0)], 2)
    rep = verify_cell_lemmas(lat, [bad])
    assert not rep.passed
    assert rep.violations["parity"][0]["points"] == [(0, 0), (2, 0)]


def test_facet_midpoint_sets_have_two_classes(census):
    for name in ("A3", "D4", "A2+Z"):
        c = census(name)
        assert all(len(midpoint_set(x)) == 2 for x in c.cells(1))


def test_multiplicity_is_cell_size(census):
    for name in ("A3", "D4", "A2+Z", "A4*"):
        c = census(name)
        for es in c.entries.values():
            for e in es:
                assert e.multiplicity == len(e.cell)


@pytest.mark.parametrize("name", ["A3", "D3*", "A2+Z", "ElongDodeca", "D4", "A4*"])
def test_complex_structure(name, census):
    rep = verify_complex_structure(census(name))
    assert rep.passed and rep.checked["intersection"] > 0


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-1, 1), min_size=3, max_size=3),
       st.lists(st.integers(-1, 1), min_size=3, max_size=3))
def test_random_3d_census_lemmas(u, w):
    g = [[2 * int(i == j) + u[i] * u[j] + w[i] * w[j] for j in range(3)] for i in range(3)]
    c = Census(Lattice.from_gram(g))
    cells = c.cells()
    assert verify_cell_lemmas(c.lattice, cells).passed
    assert dimension_conjecture_check(cells).passed
    assert verify_complex_structure(c).passed
    assert all(x.tag is not CellTag.UNCLASSIFIED for x in cells)
