from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parallelohedra import Lattice, NotPositiveDefiniteError, get, points_in_ball
from parallelohedra.catalog import catalog
from parallelohedra.harness import box_points, oracle_relevant_vectors
from parallelohedra.lattice import (
    F2Subspace,
    HalfClass,
    ParityVector,
    f2_span,
    half_class,
    parity_class,
)

F = Fraction


def test_relevant_z2():
    assert sorted(get("Z2").to_lattice().relevant) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_relevant_a2():
    rel = set(get("A2").to_lattice().relevant)
    assert rel == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)}


def test_relevant_d5_count():
    # frozen from the box-enumeration oracle
    assert len(get("D5").to_lattice().relevant) == 40


@pytest.mark.parametrize("spec", catalog(), ids=lambda s: s.name)
def test_relevant_matches_oracle(spec):
    lat = spec.to_lattice()
    assert sorted(lat.relevant) == oracle_relevant_vectors(lat)


@pytest.mark.parametrize("spec", catalog(), ids=lambda s: s.name)
def test_relevant_symmetric(spec):
    rel = set(spec.to_lattice().relevant)
    assert all(tuple(-x for x in v) in rel for v in rel)
    assert tuple([0] * spec.dim) not in rel


def test_points_in_ball_examples():
    z2 = get("Z2").to_lattice()
    assert points_in_ball(z2, (0, 0), 1) == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
    assert points_in_ball(z2, (F(1, 2), F(1, 2)), F(1, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_points_in_ball_a2_circumcenter():
    a2 = get("A2").to_lattice()
    # Delone triangle 0, e1, e1+e2; circumcenter c has <c, e1> = 1 and <c, e1+e2> = 1
    c = (F(2, 3), F(1, 3))
    r2 = a2.norm(c)
    assert r2 == F(2, 3)
    assert points_in_ball(a2, c, r2) == [(0, 0), (1, 0), (1, 1)]
    assert box_points(a2, c, r2) == [(0, 0), (1, 0), (1, 1)]


def test_points_in_ball_rejects_negative_radius():
    with pytest.raises(ValueError):
        points_in_ball(get("Z2").to_lattice(), (0, 0), -1)


@pytest.mark.parametrize("spec", catalog(), ids=lambda s: s.name)
def test_points_in_ball_matches_box(spec):
    lat = spec.to_lattice()
    d = lat.dim
    center = tuple(F(i + 1, 3) for i in range(d))
    r2 = max(lat.gram[i][i] for i in range(d))
    assert points_in_ball(lat, center, r2) == box_points(lat, center, r2)


def test_not_positive_definite_reports_minor():
    with pytest.raises(NotPositiveDefiniteError) as exc:
        Lattice.from_gram([[1, 2], [2, 1]])
    assert exc.value.order == 2 and exc.value.minor == -3


def test_basis_gives_gram():
    lat = Lattice.from_basis([[1, 0], [1, 2]])
    assert lat.gram == ((2, 2), (2, 4))


def test_parity_examples():
    assert parity_class((3, -2, 5, 0, 1)) == ParityVector((1, 0, 1, 0, 1))
    assert parity_class((0, 0, 0, 0, 0)) == ParityVector((0, 0, 0, 0, 0))
    assert parity_class((2, 4)) == ParityVector((0, 0))
    with pytest.raises(ValueError):
        parity_class((F(1, 2), 0))


def test_half_class_examples():
    h = half_class((F(1, 2), 1, F(3, 2), 0, 0))
    assert h == HalfClass((F(1, 2), 0, F(1, 2), 0, 0))
    assert half_class((4, -7)) == HalfClass((0, 0))
    assert half_class((F(1, 2), F(1, 2))) == HalfClass((F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        half_class((F(1, 3), 0))


def test_f2_span_examples():
    s = f2_span([ParityVector((1, 0)), ParityVector((0, 1))])
    assert s.dim == 2 and ParityVector((1, 1)) in s
    empty = F2Subspace(2)
    assert empty.dim == 0 and 0 in empty and ParityVector((1, 0)) not in empty
    cube = [HalfClass(tuple(F(b >> i & 1, 2) for i in range(3))) for b in range(8)]
    assert f2_span(cube).dim == 3


vec = st.lists(st.integers(-20, 20), min_size=3, max_size=3).map(tuple)


@given(vec, vec)
def test_parity_homomorphism(x, y):
    s = tuple(a + b for a, b in zip(x, y))
    assert parity_class(s) == parity_class(x) + parity_class(y)


@given(vec, vec)
def test_half_class_homomorphism(x, y):
    hx = tuple(F(a, 2) for a in x)
    hy = tuple(F(a, 2) for a in y)
    assert half_class(tuple(a + b for a, b in zip(hx, hy))) == half_class(hx) + half_class(hy)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_relevant_for_random_forms(u, w):
    # G = I + u u^T + w w^T is positive definite
    g = [[int(i == j) + u[i] * u[j] + w[i] * w[j] for j in range(3)] for i in range(3)]
    lat = Lattice.from_gram(g)
    assert sorted(lat.relevant) == oracle_relevant_vectors(lat)
    assert 2 * 3 <= len(lat.relevant) <= 2 * (2**3 - 1)
