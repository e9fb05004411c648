"""Built-in lattices: root lattices, their duals and a few direct sums."""

from __future__ import annotations

from fractions import Fraction

from . import _linalg as la
from .io import LatticeSpec

__all__ = ["catalog", "get", "names", "cartan_a", "cartan_d", "direct_sum"]


def cartan_a(n: int) -> list[list[int]]:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
        if i + 1 < n:
            g[i][i + 1] = g[i + 1][i] = -1
    return g


def cartan_d(n: int) -> list[list[int]]:
    # chain 0-1-...-(n-2) with n-1 attached to n-3
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    for i in range(n - 2):
        g[i][i + 1] = g[i + 1][i] = -1
    g[n - 3][n - 1] = g[n - 1][n - 3] = -1
    return g


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _dual(g, scale) -> list[list[Fraction]]:
    # scaled so that all entries are integers
    return [[scale * x for x in row] for row in la.inverse(g)]


def direct_sum(*blocks) -> list[list]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def _build() -> list[LatticeSpec]:
    specs = []

    def add(name, gram, note=""):
        specs.append(LatticeSpec.from_gram(name, gram, note=note))

    for d in range(2, 6):
        add(f"Z{d}", _identity(d))
    for d in range(2, 6):
        add(f"A{d}", cartan_a(d))
    for d in range(3, 6):
        add(f"D{d}", cartan_d(d))
    for d in range(2, 6):
        add(f"A{d}*", _dual(cartan_a(d), d + 1), note=f"scaled by {d + 1}")
    add("D3*", _dual(cartan_d(3), 4), note="scaled by 4")
    add("D4*", _dual(cartan_d(4), 2), note="scaled by 2")
    add("D5*", _dual(cartan_d(5), 4), note="scaled by 4")
    add("A2+Z", direct_sum(cartan_a(2), [[1]]))
    add("A2+Z3", direct_sum(cartan_a(2), _identity(3)))
    add("A2+A2+Z", direct_sum(cartan_a(2), cartan_a(2), [[1]]))
    add("Z+D4", direct_sum([[1]], cartan_d(4)))
    add("A2+A3", direct_sum(cartan_a(2), cartan_a(3)))
    add("ElongDodeca", [[2, 0, -1], [0, 2, -1], [-1, -1, 3]],
        note="Voronoi cell is an elongated dodecahedron")
    # indecomposable 5D lattices with triangular faces whose dual cells are prisms
    add("Q5a", [[3, 1, 0, 0, -1], [1, 3, 1, -1, 1], [0, 1, 3, 0, -1],
                [0, -1, 0, 3, 0], [-1, 1, -1, 0, 3]],
        note="prism sites with pr = 0")
    add("Q5b", [[2, 1, 1, 1, 0], [1, 4, 1, 0, 0], [1, 1, 2, 1, 0],
                [1, 0, 1, 3, 1], [0, 0, 0, 1, 2]],
        note="prism sites with pr = 1")
    return specs


_CATALOG = _build()


def catalog(dim: int | None = None) -> list[LatticeSpec]:
    """Catalog entries in a fixed order, optionally filtered by dimension."""
    return [s for s in _CATALOG if dim is None or s.dim == dim]


def names(dim: int | None = None) -> list[str]:
    return [s.name for s in catalog(dim)]


def get(name: str) -> LatticeSpec:
    for s in _CATALOG:
        if s.name == name:
            return s
    raise KeyError(f"unknown catalog lattice {name!r}; known: {', '.join(names())}")
