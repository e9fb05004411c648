"""Input specs and the JSON report format.

Rationals are written as "p/q" (or integer) strings, never floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import _linalg as la
from .lattice import Lattice, NotPositiveDefiniteError

__all__ = [
    "InputError",
    "LatticeSpec",
    "PolytopeSpec",
    "AnalysisReport",
    "load_lattice",
    "load_input",
    "parse_spec",
    "render",
    "format_rational",
]


class InputError(ValueError):
    """Malformed or invalid input file."""


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render(obj: Any) -> Any:
    """Turn nested results into JSON-ready data with exact rational strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    if isinstance(obj, dict):
        return {_render_key(k): render(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [render(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=json.dumps)
        return items
    raise TypeError(f"cannot render {type(obj).__name__}")


def _render_key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, (tuple, list)):
        return "(" + ",".join(_render_key(x) for x in k) + ")"
    if isinstance(k, Fraction):
        return format_rational(k)
    return str(k)


def _matrix(value, what: str, dim: int | None) -> list[list[Fraction]]:
    if not isinstance(value, list) or not value:
        raise InputError(f"field '{what}': expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise InputError(f"field '{what}' row {i}: expected a list")
        out = []
        for j, x in enumerate(row):
            if isinstance(x, float) or isinstance(x, bool):
                raise InputError(f"field '{what}' row {i} entry {j}: use an integer or "
                                 f"a \"p/q\" string, got {x!r}")
            try:
                out.append(la.as_fraction(x))
            except (ValueError, TypeError, ZeroDivisionError):
                raise InputError(f"field '{what}' row {i} entry {j}: cannot parse "
                                 f"{x!r} as a rational") from None
        rows.append(out)
    n = len(rows)
    if dim is not None and n != dim:
        raise InputError(f"field '{what}': {n} rows but dim is {dim}")
    if any(len(r) != n for r in rows):
        raise InputError(f"field '{what}': matrix must be {n} x {n}")
    return rows


@dataclass(frozen=True)
class LatticeSpec:
    name: str
    dim: int
    gram: tuple | None = None
    basis: tuple | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if (self.gram is None) == (self.basis is None):
            raise InputError("exactly one of 'gram' and 'basis' must be given")

    @classmethod
    def from_gram(cls, name: str, gram, note: str = "") -> "LatticeSpec":
        g = tuple(tuple(la.as_fraction(x) for x in row) for row in gram)
        return cls(name, len(g), gram=g, note=note)

    @classmethod
    def from_basis(cls, name: str, basis, note: str = "") -> "LatticeSpec":
        b = tuple(tuple(la.as_fraction(x) for x in row) for row in basis)
        return cls(name, len(b), basis=b, note=note)

    def to_lattice(self) -> Lattice:
        if self.gram is not None:
            return Lattice.from_gram(self.gram, name=self.name)
        return Lattice.from_basis(self.basis, name=self.name)

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "dim": self.dim}
        if self.gram is not None:
            out["gram"] = render(self.gram)
        else:
            out["basis"] = render(self.basis)
        return out


@dataclass(frozen=True)
class PolytopeSpec:
    """A raw H-polytope {x : A x <= b}; only the Minkowski-Venkov check applies."""

    name: str
    dim: int
    a: tuple
    b: tuple

    def to_dict(self) -> dict:
        return {"name": self.name, "dim": self.dim,
                "halfspaces": {"A": render(self.a), "b": render(self.b)}}


def parse_spec(data: Any) -> LatticeSpec | PolytopeSpec:
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise InputError("field 'name': expected a string")
    dim = data.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        raise InputError("field 'dim': expected a positive integer")
    if "halfspaces" in data:
        hs = data["halfspaces"]
        if not isinstance(hs, dict) or "A" not in hs or "b" not in hs:
            raise InputError("field 'halfspaces': expected an object with 'A' and 'b'")
        try:
            a = tuple(tuple(la.as_fraction(x) for x in row) for row in hs["A"])
            b = tuple(la.as_fraction(x) for x in hs["b"])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"field 'halfspaces': {exc}") from None
        if len(a) != len(b) or not a:
            raise InputError("field 'halfspaces': A and b must have equal non-zero length")
        d = len(a[0])
        if any(len(r) != d for r in a) or (dim is not None and d != dim):
            raise InputError("field 'halfspaces': inconsistent dimensions")
        return PolytopeSpec(name, d, a, b)
    has_g, has_b = "gram" in data, "basis" in data
    if has_g == has_b:
        raise InputError("exactly one of 'gram' and 'basis' must be given")
    key = "gram" if has_g else "basis"
    m = _matrix(data[key], key, dim)
    spec = (LatticeSpec.from_gram if has_g else LatticeSpec.from_basis)(name, m)
    try:
        spec.to_lattice()
    except NotPositiveDefiniteError as exc:
        raise InputError(f"field '{key}': {exc}") from exc
    except ValueError as exc:
        raise InputError(f"field '{key}': {exc}") from exc
    return spec


def load_input(path: str | Path) -> LatticeSpec | PolytopeSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return parse_spec(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_lattice(path: str | Path) -> LatticeSpec:
    spec = load_input(path)
    if not isinstance(spec, LatticeSpec):
        raise InputError(f"{path}: expected a lattice (gram or basis), got halfspaces")
    return spec


@dataclass
class AnalysisReport:
    """Outcome of every requested check for one input, as plain JSON data."""

    lattice: dict
    checks: list[str]
    results: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def to_dict(self, timings: bool = True) -> dict:
        out = {"lattice": self.lattice, "checks": list(self.checks),
               "results": render(self.results), "failures": list(self.failures),
               "status": "fail" if self.failures else "ok"}
        if timings:
            out["timings"] = {k: v for k, v in self.timings.items()}
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        d = json.loads(text)
        return cls(d["lattice"], d["checks"], d["results"], d["failures"],
                   d.get("timings", {}))
