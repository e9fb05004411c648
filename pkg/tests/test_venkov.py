import pytest

from parallelohedra import build_red_graph, is_decomposable
from parallelohedra import _linalg as la


def test_z2(census):
    g = build_red_graph(census("Z2"))
    assert len(g.nodes) == 2 and not g.edges
    dec = is_decomposable(g)
    assert dec.decomposable
    assert sorted(map(tuple, dec.spans)) == [((0, 1),), ((1, 0),)]


def test_a2(census):
    g = build_red_graph(census("A2"))
    assert len(g.nodes) == 3 and len(g.edges) == 3
    assert not is_decomposable(g).decomposable


def test_hex_prism(census):
    g = build_red_graph(census("A2+Z"))
    assert len(g.nodes) == 4
    assert g.neighbours((0, 0, 1)) == []
    assert sorted(len(c) for c in g.components) == [1, 3]


def test_d5_and_z_d4(census):
    assert not is_decomposable(build_red_graph(census("D5"))).decomposable
    dec = is_decomposable(build_red_graph(census("Z+D4")))
    assert dec.decomposable and sorted(dec.ranks) == [1, 4]


def test_nodes_sorted_and_halved(census):
    for name in ("A3", "D4", "A2+Z"):
        c = census(name)
        g = build_red_graph(c)
        assert g.nodes == sorted(g.nodes)
        assert 2 * len(g.nodes) == len(c.cell.facets)


def test_edge_witnesses_are_triangles(census):
    c = census("A3*")
    g = build_red_graph(c)
    for key in g.edges.values():
        face = next(f for f in c.cell.faces_of_codim(2) if f.key == key)
        assert c.dual_of(face).tag.value == "Triangle"


@pytest.mark.parametrize("name,blocks", [
    ("A2+Z3", [2, 1, 1, 1]),
    ("A2+A2+Z", [2, 2, 1]),
    ("Z+D4", [1, 4]),
    ("A2+A3", [2, 3]),
])
def test_direct_sum_spans(name, blocks, census):
    c = census(name)
    dec = is_decomposable(build_red_graph(c))
    assert sorted(dec.ranks) == sorted(blocks)
    spans = [list(s) for s in dec.spans]
    # jointly span the space, pairwise trivial intersection, and G-orthogonal
    assert la.rank([v for s in spans for v in s]) == c.dim
    g = c.lattice.gram
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            assert all(la.dot(u, la.matvec(g, v)) == 0 for u in spans[i] for v in spans[j])
