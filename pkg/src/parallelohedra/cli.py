"""Command line entry point.

Exit codes: 0 all checks passed, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    CHECKS,
    analyze,
    oracle_dual_cells,
    oracle_relevant_vectors,
    oracle_vertices,
    resolve_input,
)
from .io import InputError, LatticeSpec, render


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parallelohedra",
                                description="Exact analysis of lattice Voronoi parallelohedra.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run checks on a lattice or polytope file")
    a.add_argument("source", help="JSON input file or catalog:NAME")
    a.add_argument("--checks", default=",".join(CHECKS),
                   help=f"comma separated subset of {','.join(CHECKS)}")
    a.add_argument("--out", type=Path, help="write the report here instead of stdout")
    a.add_argument("--no-timings", action="store_true", help="omit the timing block")

    c = sub.add_parser("catalog", help="list built-in lattices")
    c.add_argument("--dim", type=int)
    c.add_argument("--json", action="store_true", help="print full specs as JSON")

    u = sub.add_parser("audit5d", help="alias for analyze --checks audit5d")
    u.add_argument("source")
    u.add_argument("--out", type=Path)
    u.add_argument("--no-timings", action="store_true")

    o = sub.add_parser("oracle", help="brute-force reference computations")
    o.add_argument("which", choices=["relevant-vectors", "vertices", "dual-cells"])
    o.add_argument("source")
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _run_analyze(source: str, checks: str, out: Path | None, timings: bool) -> int:
    report = analyze(resolve_input(source), checks)
    _emit(report.to_json(timings), out)
    for f in report.failures:
        print(f, file=sys.stderr)
    return report.exit_code


def _run_oracle(which: str, source: str) -> int:
    spec = resolve_input(source)
    if not isinstance(spec, LatticeSpec):
        raise InputError("oracles need a lattice input")
    lat = spec.to_lattice()
    if which == "relevant-vectors":
        vs = oracle_relevant_vectors(lat)
        data = {"count": len(vs), "vectors": vs}
    elif which == "vertices":
        vs = oracle_vertices(lat)
        data = {"count": len(vs), "vertices": vs}
    else:
        cells = oracle_dual_cells(lat)
        data = {"count": len(cells),
                "cells": [{"vertex": v, "points": pts} for v, pts in cells.items()]}
    print(json.dumps(render(data), indent=2, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _run_analyze(args.source, args.checks, args.out, not args.no_timings)
        if args.command == "audit5d":
            return _run_analyze(args.source, "audit5d", args.out, not args.no_timings)
        if args.command == "catalog":
            from .catalog import catalog

            specs = catalog(args.dim)
            if args.json:
                print(json.dumps([s.to_dict() for s in specs], indent=2))
            else:
                for s in specs:
                    print(f"{s.name}\t{s.dim}\t{s.note}".rstrip())
            return 0
        return _run_oracle(args.which, args.source)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
