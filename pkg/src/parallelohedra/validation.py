"""Input checks shared by the estimator facade."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from . import _linalg as la
from .io import LatticeSpec
from .lattice import Lattice, _check_pd

__all__ = ["check_gram", "check_points", "as_lattice"]


def _rational(x, where: str) -> Fraction:
    try:
        return la.as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"{where}: cannot interpret {x!r} as a rational") from None


def check_gram(gram: Any) -> list[list[Fraction]]:
    """Square, symmetric, positive definite, exact."""
    rows = [list(r) for r in gram]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError(f"Gram matrix must be square, got {n} rows of lengths "
                         f"{sorted({len(r) for r in rows})}")
    g = [[_rational(x, f"gram[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    _check_pd(g)
    return g


def check_points(x: Any, dim: int) -> list[tuple[Fraction, ...]]:
    """A 2D array-like of shape (n, dim); a single point is promoted to (1, dim)."""
    rows = [list(r) if hasattr(r, "__iter__") and not isinstance(r, str) else r for r in x]
    if rows and not isinstance(rows[0], list):
        rows = [rows]
    out = []
    for i, r in enumerate(rows):
        if len(r) != dim:
            raise ValueError(f"point {i} has {len(r)} coordinates, expected {dim}")
        out.append(tuple(_rational(v, f"point {i}") for v in r))
    return out


def as_lattice(obj: Any) -> Lattice:
    if isinstance(obj, Lattice):
        return obj
    if isinstance(obj, LatticeSpec):
        return obj.to_lattice()
    return Lattice.from_gram(check_gram(obj))
