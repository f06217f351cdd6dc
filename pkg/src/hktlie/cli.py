"""Command line entry point: ``hktlie check|report|construct|verify-paper|list``.

Exit status: 0 success, 1 semantic failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import linalg as la
from .catalog import BUILTIN_NAMES, CatalogEntry, CatalogValidationError, builtin
from .classify import classify
from .constructions import (
    iterate_tangent,
    kaehler_to_hkt,
    rho_extension,
    rho_lift_connection,
    tangent_algebra,
    tangent_lift_connection,
)
from .errors import HKTError
from .fileformat import FormatSyntaxError, parse, serialize
from .geometry import Check, curvature, validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_entry(source: str) -> CatalogEntry:
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        if name not in BUILTIN_NAMES:
            raise UsageError(f"unknown builtin {name!r}; try 'list'")
        return builtin(name)
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return parse(text)
    except FormatSyntaxError as exc:
        raise UsageError(f"{source}: {exc}") from None


def _print_check(c: Check, out) -> None:
    status = "PASS" if c.ok else "FAIL"
    print(f"{status}  {c.name}" + (f": {c.detail}" if c.detail else ""), file=out)


def entry_checks(entry: CatalogEntry) -> list[Check]:
    checks = list(validate(entry.structure))
    if not all(c.ok for c in checks):
        return checks
    g = entry.structure.algebra
    for name, C in sorted(entry.connections.items()):
        bad = next(((i, j) for (i, j), R in curvature(C, g).items() if not la.is_zero(R)), None)
        detail = "" if bad is None else f"R(e{bad[0] + 1}, e{bad[1] + 1}) != 0"
        checks.append(Check(f"connection {name} flat", bad is None, detail, bad))
    for name, r in sorted(entry.quat_reps.items()):
        try:
            r.validate(g)
            checks.append(Check(f"representation {name}", True))
        except HKTError as exc:
            checks.append(Check(f"representation {name}", False, str(exc), exc.witness))
    return checks


def cmd_check(args, out) -> int:
    try:
        entry = _read_entry(args.input)
    except CatalogValidationError as exc:
        print(f"FAIL  {exc}", file=out)
        return EXIT_FAIL
    checks = entry_checks(entry)
    for c in checks:
        _print_check(c, out)
    ok = all(c.ok for c in checks)
    print(f"{entry.name}: {'valid' if ok else 'invalid'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args, out) -> int:
    try:
        entry = _read_entry(args.input)
    except CatalogValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_FAIL
    bad = [c for c in validate(entry.structure) if not c.ok]
    if bad and bad[0].name == "jacobi":
        print(f"invalid input: {bad[0].detail}", file=sys.stderr)
        return EXIT_FAIL
    rep = classify(entry.structure, entry.name)
    out.write(rep.to_json() if args.json else rep.to_text())
    return EXIT_OK


def construct(kind: str, entry: CatalogEntry, conn: str) -> CatalogEntry:
    """Run one construction; the result carries the lifted connection so it
    can be fed back into ``construct``."""
    s = entry.structure
    if kind == "rho":
        if conn not in entry.quat_reps:
            raise UsageError(f"{entry.name} has no representation {conn!r}")
        r = entry.quat_reps[conn]
        out = rho_extension(s, r)
        return CatalogEntry(f"{entry.name}_{conn}", out, connections={f"{conn}_lift": rho_lift_connection(r, s.dim)})
    if conn not in entry.connections:
        raise UsageError(f"{entry.name} has no connection {conn!r}")
    D = entry.connections[conn]
    if kind == "tangent":
        out = tangent_algebra(s, D)
        return CatalogEntry(f"{entry.name}_tangent", out, connections={f"{conn}_lift": tangent_lift_connection(D)})
    if kind == "kaehler-double":
        return CatalogEntry(f"{entry.name}_double", kaehler_to_hkt(s, D))
    if kind == "iterate":
        once = tangent_algebra(s, D)
        out = iterate_tangent(once, D)
        lifted = tangent_lift_connection(tangent_lift_connection(D))
        return CatalogEntry(f"{entry.name}_tangent2", out, connections={f"{conn}_lift2": lifted})
    raise UsageError(f"unknown construction {kind!r}")


def cmd_construct(args, out) -> int:
    try:
        entry = _read_entry(args.input)
    except CatalogValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        result = construct(args.kind, entry, args.connection)
    except HKTError as exc:
        print(f"construction rejected: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = serialize(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {result.name} (dim {result.structure.dim}) to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import run

    if args.case is not None and args.case not in BUILTIN_NAMES:
        raise UsageError(f"unknown case {args.case!r}; known: {', '.join(BUILTIN_NAMES)}")
    total = failed = 0
    for crit, rows in run(args.case):
        ok = all(r.ok for r in rows)
        total += 1
        failed += not ok
        label = f"[{crit.number}]" if crit.number else "[-]"
        print(f"{label} {'PASS' if ok else 'FAIL'}  {crit.title}", file=out)
        for r in rows:
            print(r.line(), file=out)
    print(f"{total - failed}/{total} criteria passed", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_list(args, out) -> int:
    width = max(len(n) for n in BUILTIN_NAMES)
    for name in BUILTIN_NAMES:
        e = builtin(name)
        print(f"{name:<{width}}  dim {e.structure.dim:>2}  {e.description}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hktlie", description="Exact HKT structures on Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="structural validation of an entry")
    c.add_argument("input", help="file path or builtin:NAME")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("report", help="classification report")
    r.add_argument("input", help="file path or builtin:NAME")
    fmt = r.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--text", action="store_true", help="plain text output (default)")
    r.set_defaults(func=cmd_report)

    k = sub.add_parser("construct", help="build a new structure")
    k.add_argument("kind", choices=("tangent", "rho", "kaehler-double", "iterate"))
    k.add_argument("input", help="file path or builtin:NAME")
    k.add_argument("connection", help="name of the connection (or representation for rho)")
    k.add_argument("--out", help="write the result here instead of stdout")
    k.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify-paper", help="run the acceptance criteria")
    v.add_argument("--case", help="restrict to one catalog entry")
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("list", help="list builtin entries")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
