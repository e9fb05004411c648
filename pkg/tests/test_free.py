from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parallelohedra import Census, CellTag, get, voronoi_cell
from parallelohedra.free import (
    FreeMethod,
    add_segment,
    default_length,
    edge_direction,
    enumerate_free_edges,
    is_free_triangle_criterion,
    replay_certificate,
    subspace_certificate,
)

F = Fraction


def _dirs(census):
    return {tuple(int(x) for x in fe.direction) for fe in enumerate_free_edges(census)}


def test_z2_vacuous(census):
    ok, cert = is_free_triangle_criterion(census("Z2"), (1, 2))
    assert ok and cert.witnesses == ()


def test_a2_edge_directions_free(census):
    c = census("A2")
    assert _dirs(c) == {(1, -1), (1, 2), (2, 1)}
    for v in [(1, -1), (1, 2), (2, 1)]:
        ok, cert = is_free_triangle_criterion(c, v)
        assert ok and replay_certificate(c, cert)
    assert not is_free_triangle_criterion(c, (1, 0))[0]


def test_z3_axis_free(census):
    assert is_free_triangle_criterion(census("Z3"), (1, 0, 0))[0]


def test_zero_direction_rejected(census):
    with pytest.raises(ValueError):
        is_free_triangle_criterion(census("A2"), (0, 0))


def test_subspace_certificate_hex_prism_vertical(census):
    c = census("A2+Z")
    vertical = [e for e in c.cell.faces[1] if edge_direction(c.cell, e) == (0, 0, 1)]
    assert vertical
    for e in vertical:
        cert = subspace_certificate(c, e)
        assert cert is not None and cert.method is FreeMethod.SUBSPACE
        assert replay_certificate(c, cert)
        # the edge is a codim-2 face with a triangular dual cell; non-facet
        # contact classes fill the rest of the hyperplane
        assert len(cert.witnesses[0]) == 3


def test_subspace_certificate_z5(census):
    c = census("Z5")
    assert all(subspace_certificate(c, e) is not None for e in c.cell.faces[1])


def test_cube_cell_edges_have_certificates(census):
    c = census("A2+Z3")
    cubes = [e for e in c.entries[3] if e.cell.tag is CellTag.CUBE]
    assert cubes
    for entry in cubes:
        for ci in c.cell.children[entry.face.index]:
            edge = c.cell.face(ci)
            assert subspace_certificate(c, edge) is not None
            assert is_free_triangle_criterion(c, edge_direction(c.cell, edge))[0]


def test_add_segment_cube_gives_box():
    res = add_segment(voronoi_cell(get("Z3").to_lattice()), (1, 0, 0), 1)
    assert res.passed and res.polytope.f_vector == (8, 12, 6)
    xs = {v[0] for v in res.polytope.vertices}
    assert xs == {F(-1), F(1)}


def test_add_segment_hexagon_edge_parallel():
    res = add_segment(voronoi_cell(get("A2").to_lattice()), (1, -1), F(1, 2))
    assert res.passed and len(res.polytope.vertices) == 6


def test_add_segment_hexagon_generic_is_octagon():
    res = add_segment(voronoi_cell(get("A2").to_lattice()), (1, 0), F(1, 2))
    assert len(res.polytope.vertices) == 8
    assert not res.passed and not res.mv.conditions[3]


def test_add_segment_rejects_bad_input():
    cell = voronoi_cell(get("A2").to_lattice())
    with pytest.raises(ValueError):
        add_segment(cell, (0, 0))
    with pytest.raises(ValueError):
        add_segment(cell, (1, 0), 0)


def test_default_length():
    lat = get("Z3").to_lattice()
    # shortest facet vector has norm 1; |l e1| <= 1/2 gives l = 1/2
    assert default_length(lat, (1, 0, 0)) == F(1, 2)
    assert default_length(lat, (4, 0, 0)) == F(1, 8)


def test_enumerate_z5_axes(census):
    assert _dirs(census("Z5")) == {tuple(int(i == j) for j in range(5)) for i in range(5)}


def test_enumerate_a2_z3(census):
    dirs = _dirs(census("A2+Z3"))
    axes = {(0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)}
    a2 = {(1, -1, 0, 0, 0), (1, 2, 0, 0, 0), (2, 1, 0, 0, 0)}
    assert axes | a2 <= dirs


def test_enumerate_truncated_octahedron(census):
    free = enumerate_free_edges(census("D3*"))
    assert len(free) == 6 and all(fe.mv_pass for fe in free)


@pytest.mark.parametrize("name", ["A3", "A3*", "D4", "A2+Z", "ElongDodeca", "A4*"])
def test_subspace_implies_triangle(name, census):
    c = census(name)
    for e in c.cell.faces[1]:
        cert = subspace_certificate(c, e)
        if cert is not None:
            assert is_free_triangle_criterion(c, cert.direction)[0]


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 16), st.sampled_from(["A2", "A3", "D3*", "A2+Z"]))
def test_verdict_independent_of_length(k, name):
    from tests.conftest import census_of

    c = census_of(name)
    for fe in enumerate_free_edges(c, verify=False):
        base = default_length(c, fe.direction)
        assert add_segment(c.cell, fe.direction, base * F(k, 4)).passed
