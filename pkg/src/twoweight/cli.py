"""Command-line entry point: ``twoweight analyze | sweep | charsums``.

Exit codes: 0 when every check passes, 1 on any verification mismatch,
2 for invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import SweepConfig, charsum_audit, run_analyze, run_sweep
from .code_builder import format_defining_set, format_generator_matrix
from .field_tower import FieldError
from .srg import GraphError, build_graph, format_graph, omega_set

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def emit(kind: str, path: str | Path, *, result=None, payload=None) -> None:
    """Write one artifact: graph, defining_set, matrix or report."""
    path = Path(path)
    if kind == "report":
        text = dumps(payload if payload is not None else result.report)
    elif kind == "defining_set":
        text = format_defining_set(result.code.tower, result.code.defining_set)
    elif kind == "matrix":
        text = format_generator_matrix(result.code)
    elif kind == "graph":
        graph = result.graph or build_graph(result.code.tower, omega_set(result.code))
        text = format_graph(graph)
    else:
        raise ValueError(f"unknown artifact kind {kind!r}")
    path.write_text(text, encoding="utf-8")


def _cmd_analyze(args) -> int:
    try:
        result = run_analyze(args.p, args.e, args.s, args.c, keep_graph=args.emit_graph is not None)
    except FieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(dumps(result.report))
    try:
        if args.json:
            emit("report", args.json, result=result)
        if args.emit_set:
            emit("defining_set", args.emit_set, result=result)
        if args.emit_matrix:
            emit("matrix", args.emit_matrix, result=result)
        if args.emit_graph:
            emit("graph", args.emit_graph, result=result)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if result.ok else EXIT_MISMATCH


def _status(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def _sweep_line(r: dict) -> str:
    pr = r["params"]
    mm = set(r["mismatches"])
    srg = r.get("srg")
    srg_col = "-" if srg is None or "skipped" in srg else _status(srg["match"])
    d = r["dual"]
    return (f"{pr['p']:>3} {pr['e']:>2} {pr['s']:>2} {pr['q']:>3} {pr['c_index']:>3} "
            f"{r['length']['computed']:>5} {r['dimension']:>3} "
            f"{'pass' if r['theorem7_match'] else 'FAIL':>5} "
            f"{_status('dual' not in mm):>5} {str(d['d_observed']):>3} "
            f"{_status('minimality' not in mm):>5} {srg_col:>5}")


def _cmd_sweep(args) -> int:
    config = SweepConfig(max_ambient_size=args.max_size, include_charsums=args.charsums,
                         thread_count=args.threads or (os.cpu_count() or 1))
    result = run_sweep(config)
    print("  p  e  s   q   c     n   k    T7  dual  d^  minim   srg")
    for r in result.reports:
        print(_sweep_line(r))
    for c in result.charsums:
        pr = c["params"]
        names = " ".join(f"{x['name']}={_status(x['ok'])}" for x in c["checks"])
        print(f"charsums p={pr['p']} e={pr['e']} s={pr['s']}: {names}")
    bad = sum(1 for r in result.reports if r["mismatches"])
    print(f"{len(result.reports)} cases, {bad} with mismatches; overall {_status(result.ok)}")
    if args.json:
        Path(args.json).write_text(dumps(result.as_json()), encoding="utf-8")
    return EXIT_OK if result.ok else EXIT_MISMATCH


def _cmd_charsums(args) -> int:
    try:
        audit = charsum_audit(args.p, args.e, args.s)
    except FieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for check in audit["checks"]:
        print(f"{check['name']}: {_status(check['ok'])}")
        for ex in check.get("counterexamples", []):
            print(f"  counterexample {json.dumps(ex)}")
    if args.json:
        Path(args.json).write_text(dumps(audit), encoding="utf-8")
    return EXIT_OK if audit["ok"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoweight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="construct one code and verify every closed form")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--e", type=int, required=True)
    a.add_argument("--s", type=int, required=True)
    a.add_argument("--c", type=int, required=True, help="canonical index of c in F_q")
    a.add_argument("--emit-graph", metavar="PATH")
    a.add_argument("--emit-set", metavar="PATH")
    a.add_argument("--emit-matrix", metavar="PATH")
    a.add_argument("--json", metavar="PATH")
    a.set_defaults(func=_cmd_analyze)

    w = sub.add_parser("sweep", help="verify every admissible parameter set")
    w.add_argument("--max-size", type=int, default=4096)
    w.add_argument("--threads", type=int, default=0)
    w.add_argument("--charsums", action="store_true")
    w.add_argument("--json", metavar="PATH")
    w.set_defaults(func=_cmd_sweep)

    c = sub.add_parser("charsums", help="audit the character-sum identities on one tower")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--json", metavar="PATH")
    c.set_defaults(func=_cmd_charsums)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
