"""Exact lattices, short-vector enumeration and the two F2 quotient spaces.

Every lattice point is stored by its integer coordinates in the lattice
basis; all metric information lives in the Gram matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor, isqrt
from typing import Iterable, Sequence

from . import _linalg as la

__all__ = [
    "Lattice",
    "NotPositiveDefiniteError",
    "ParityVector",
    "HalfClass",
    "F2Subspace",
    "relevant_vectors",
    "points_in_ball",
    "parity_class",
    "half_class",
    "f2_span",
    "coset_minima",
]


class NotPositiveDefiniteError(ValueError):
    """Raised when a Gram matrix fails the leading-minor test."""

    def __init__(self, order: int, minor: Fraction):
        self.order = order
        self.minor = minor
        super().__init__(
            f"Gram matrix is not positive definite: leading minor of order "
            f"{order} equals {minor}"
        )


def _check_pd(gram) -> None:
    n = len(gram)
    for i in range(n):
        for j in range(n):
            if gram[i][j] != gram[j][i]:
                raise ValueError(f"Gram matrix is not symmetric at ({i}, {j})")
    for k, m in enumerate(la.leading_minors(gram), start=1):
        if m <= 0:
            raise NotPositiveDefiniteError(k, m)


@dataclass(frozen=True)
class Lattice:
    """A full-rank lattice given by its Gram matrix (and optionally a basis).

    ``basis`` holds the basis vectors as columns, so that
    ``gram == basis^T basis``.
    """

    gram: tuple[tuple[Fraction, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gram = tuple(tuple(la.as_fraction(x) for x in row) for row in self.gram)
        if not gram or any(len(row) != len(gram) for row in gram):
            raise ValueError("Gram matrix must be square and non-empty")
        object.__setattr__(self, "gram", gram)
        if self.basis is not None:
            basis = tuple(tuple(la.as_fraction(x) for x in row) for row in self.basis)
            if len(basis) != len(gram) or any(len(r) != len(gram) for r in basis):
                raise ValueError("basis must be a d x d matrix")
            if la.det(basis) == 0:
                raise ValueError("basis is singular")
            if tuple(map(tuple, la.matmul(la.transpose(basis), basis))) != gram:
                raise ValueError("gram does not match basis^T basis")
            object.__setattr__(self, "basis", basis)
        _check_pd(gram)

    @classmethod
    def from_gram(cls, gram, name: str = "") -> "Lattice":
        return cls(gram=tuple(map(tuple, la.frac_matrix(gram))), name=name)

    @classmethod
    def from_basis(cls, basis, name: str = "") -> "Lattice":
        """Columns of ``basis`` are the basis vectors."""
        b = la.frac_matrix(basis)
        gram = la.matmul(la.transpose(b), b)
        return cls(gram=tuple(map(tuple, gram)), basis=tuple(map(tuple, b)), name=name)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def norm(self, x: Sequence) -> Fraction:
        return la.quad(self.gram, x)

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        return la.quad(self.gram, x, y)

    @cached_property
    def _int_gram(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        # gram == int_gram / scale, used on hot paths
        scale = la.common_denominator(x for row in self.gram for x in row)
        return scale, tuple(tuple(int(x * scale) for x in row) for row in self.gram)

    @cached_property
    def _ldl(self):
        return la.ldl(self.gram)

    @cached_property
    def coset_minima(self) -> dict[int, tuple[Fraction, tuple[tuple[int, ...], ...]]]:
        return coset_minima(self)

    @cached_property
    def relevant(self) -> tuple[tuple[int, ...], ...]:
        return tuple(relevant_vectors(self))


# --------------------------------------------------------------------------
# enumeration


def points_in_ball(lat: Lattice, center: Sequence, radius_sq) -> list[tuple[int, ...]]:
    """All lattice points x with ||x - center||^2 <= radius_sq, sorted."""
    radius_sq = la.as_fraction(radius_sq)
    if radius_sq < 0:
        raise ValueError("radius_sq must be non-negative")
    c = [la.as_fraction(x) for x in center]
    if len(c) != lat.dim:
        raise ValueError("center has the wrong dimension")
    mu, diag = lat._ldl
    d = lat.dim
    out: list[tuple[int, ...]] = []
    x = [0] * d

    def rec(i: int, remaining: Fraction) -> None:
        shift = sum((mu[i][j] * (x[j] - c[j]) for j in range(i + 1, d)), Fraction(0))
        z = c[i] - shift
        r2 = remaining / diag[i]
        width = isqrt(floor(r2)) + 1
        lo, hi = floor(z) - width, floor(z) + width + 1
        for xi in range(lo, hi + 1):
            t = xi - z
            used = diag[i] * t * t
            if used <= remaining:
                x[i] = xi
                if i == 0:
                    out.append(tuple(x))
                else:
                    rec(i - 1, remaining - used)

    rec(d - 1, radius_sq)
    out.sort()
    return out


def _parity_bits(x: Sequence[int]) -> int:
    bits = 0
    for i, xi in enumerate(x):
        if xi & 1:
            bits |= 1 << i
    return bits


def coset_minima(lat: Lattice) -> dict[int, tuple[Fraction, tuple[tuple[int, ...], ...]]]:
    """Minimum norm and all minimal vectors of every coset of 2L in L.

    Keys are parity bitmasks (bit i = coordinate i mod 2).  The zero coset
    maps to (0, ((0,...,0),)).
    """
    d = lat.dim
    # upper bound per coset from representatives in {-1, 0, 1}^d
    bound: dict[int, Fraction] = {}
    for x in itertools.product((-1, 0, 1), repeat=d):
        b = _parity_bits(x)
        n = lat.norm(x)
        if b not in bound or n < bound[b]:
            bound[b] = n
    radius = max(bound.values())
    best: dict[int, tuple[Fraction, list]] = {}
    for x in points_in_ball(lat, (0,) * d, radius):
        b = _parity_bits(x)
        n = lat.norm(x)
        cur = best.get(b)
        if cur is None or n < cur[0]:
            best[b] = (n, [x])
        elif n == cur[0]:
            cur[1].append(x)
    assert len(best) == 2**d
    return {b: (n, tuple(sorted(vs))) for b, (n, vs) in best.items()}


def relevant_vectors(lat: Lattice) -> list[tuple[int, ...]]:
    """Voronoi-relevant vectors: v with +-v the unique minima of v + 2L."""
    out = []
    for b, (_, vs) in lat.coset_minima.items():
        if b and len(vs) == 2:
            out.extend(vs)
    out.sort()
    return out


# --------------------------------------------------------------------------
# F2 quotient spaces


@dataclass(frozen=True, order=True)
class ParityVector:
    """Element of L/2L, written [x_1, ..., x_d]."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("parity bits must be 0 or 1")

    @property
    def mask(self) -> int:
        return _parity_bits(self.bits)

    def __add__(self, other: "ParityVector") -> "ParityVector":
        return ParityVector(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.bits)) + "]"


@dataclass(frozen=True, order=True)
class HalfClass:
    """Element of (L/2)/L, written <x_1, ..., x_d> with x_i in {0, 1/2}."""

    halves: tuple[Fraction, ...]

    def __post_init__(self):
        halves = tuple(Fraction(h) for h in self.halves)
        if any(h not in (0, Fraction(1, 2)) for h in halves):
            raise ValueError("half-class entries must be 0 or 1/2")
        object.__setattr__(self, "halves", halves)

    @property
    def mask(self) -> int:
        return _parity_bits([int(2 * h) for h in self.halves])

    @classmethod
    def from_mask(cls, mask: int, dim: int) -> "HalfClass":
        return cls(tuple(Fraction((mask >> i) & 1, 2) for i in range(dim)))

    def __add__(self, other: "HalfClass") -> "HalfClass":
        return HalfClass.from_mask(self.mask ^ other.mask, len(self.halves))

    def __str__(self) -> str:
        return "<" + ",".join(str(h) for h in self.halves) + ">"


def parity_class(x: Sequence) -> ParityVector:
    bits = []
    for xi in x:
        q = la.as_fraction(xi)
        if q.denominator != 1:
            raise ValueError(f"{x!r} is not a lattice point")
        bits.append(int(q) % 2)
    return ParityVector(tuple(bits))


def half_class(x: Sequence) -> HalfClass:
    halves = []
    for xi in x:
        q = 2 * la.as_fraction(xi)
        if q.denominator != 1:
            raise ValueError(f"{x!r} is not a half-lattice point")
        halves.append(Fraction(int(q) % 2, 2))
    return HalfClass(tuple(halves))


class F2Subspace:
    """Linear subspace of F2^d stored as a reduced basis of bitmasks."""

    def __init__(self, dim: int, masks: Iterable[int] = ()):
        self.ambient_dim = dim
        self._basis: dict[int, int] = {}  # leading bit -> vector
        for m in masks:
            self._insert(m)

    def _reduce(self, m: int) -> int:
        while m:
            lead = m.bit_length() - 1
            b = self._basis.get(lead)
            if b is None:
                return m
            m ^= b
        return 0

    def _insert(self, m: int) -> bool:
        m = self._reduce(m)
        if not m:
            return False
        self._basis[m.bit_length() - 1] = m
        return True

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> list[int]:
        return [self._basis[k] for k in sorted(self._basis, reverse=True)]

    def __contains__(self, item) -> bool:
        return self._reduce(_as_mask(item)) == 0

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return sorted(out)

    def __len__(self) -> int:
        return 2**self.dim

    def __repr__(self) -> str:
        return f"F2Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _as_mask(item) -> int:
    if isinstance(item, int):
        return item
    if isinstance(item, (ParityVector, HalfClass)):
        return item.mask
    return _parity_bits([int(2 * Fraction(v)) if Fraction(v).denominator == 2
                         else int(v) for v in item])


def f2_span(vectors: Sequence, dim: int | None = None) -> F2Subspace:
    """Span of parity or half classes (or raw bitmasks with ``dim`` given)."""
    vectors = list(vectors)
    if dim is None:
        if not vectors:
            raise ValueError("dim is required for an empty span")
        v0 = vectors[0]
        dim = len(v0.bits if isinstance(v0, ParityVector) else v0.halves)
    for v in vectors:
        n = len(v.bits) if isinstance(v, ParityVector) else (
            len(v.halves) if isinstance(v, HalfClass) else dim)
        if n != dim:
            raise ValueError("inconsistent dimensions in f2_span")
    return F2Subspace(dim, (_as_mask(v) for v in vectors))
