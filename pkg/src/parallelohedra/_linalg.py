"""Small exact linear algebra over the rationals.

Matrices are lists of rows; entries are ``Fraction`` or ``int``.  Sizes are
desk scale (d <= 6, a few hundred rows at most), so plain Gaussian
elimination is all we need.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = list


def as_fraction(x) -> Fraction:
    """Parse an int, Fraction, float or "p/q" string exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    # numpy scalars and similar
    try:
        return Fraction(int(x)) if int(x) == x else Fraction(float(x))
    except (TypeError, ValueError) as exc:
        raise TypeError(f"cannot interpret {x!r} as a rational") from exc


def frac_matrix(rows) -> list[list[Fraction]]:
    return [[as_fraction(x) for x in row] for row in rows]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[dot(row, col) for col in bt] for row in a]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def quad(g: Sequence[Sequence], x: Sequence, y: Sequence | None = None):
    """Bilinear form x^T g y (y defaults to x)."""
    if y is None:
        y = x
    return dot(x, matvec(g, y))


def row_reduce(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(row_reduce(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(m[0])
    rref, pivots = row_reduce(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of a x = b, or None when inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    rref, pivots = row_reduce(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(rref, pivots):
        x[p] = row[n]
    return x


def det(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    rref, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rref]


def leading_minors(m: Sequence[Sequence]) -> list[Fraction]:
    return [det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def ldl(g: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational LDL^T of a symmetric positive definite matrix.

    Returns (mu, diag) with g = U^T diag(D) U where U is unit upper
    triangular, U[i][j] = mu[i][j] for j > i.  Then
    x^T g x = sum_i D_i (x_i + sum_{j>i} mu[i][j] x_j)^2.
    """
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    mu = [[Fraction(0)] * n for _ in range(n)]
    diag = []
    for i in range(n):
        di = a[i][i]
        if di <= 0:
            raise ValueError("matrix is not positive definite")
        diag.append(di)
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / di
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= a[i][j] * a[i][k] / di
    return mu, diag


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def common_denominator(values) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = common_denominator(v)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def sign_normalized(v: Sequence[int]) -> tuple[int, ...]:
    """Flip v so that its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)
