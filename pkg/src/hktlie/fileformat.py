"""Text interchange format for catalog entries.

A file is one JSON document.  Scalars are strings in the literal grammar of
:func:`~hktlie.scalar.parse_scalar`; indices are 1-based.  Field order and
layout produced by :func:`serialize` are canonical, so the output is
byte-stable and diffs line up with matrix rows::

    {
      "name": "example",
      "dim": 4,
      "scalars": "Q(sqrt2)",
      "brackets": [
        {"i": 1, "j": 2, "out": [{"k": 3, "c": "1"}]}
      ],
      "metric": [
        ["1", "0", "0", "0"],
        ...
      ],
      "complex": {"J1": [...], "J2": [...], "J3": [...]},
      "connections": {"D": [[...], ...]},
      "quat_reps": {"rho1": {"q": 1, "matrices": [...]}},
      ...
    }

``J3`` may be omitted and is then derived as ``J1 J2``.  A single
representation may also be given as ``"quat_rep": {"q": .., "matrices": ..}``;
it is read under the name ``rho``.  Quaternionic
coordinates follow the basis ``(1, i, j, k)`` of each ``H`` factor, with
``L1, L2, L3`` the left multiplications by ``i, j, k``.

Two error stages are kept apart: :class:`FormatSyntaxError` (with line and
column) for anything that is not a well-formed document, and
:class:`~hktlie.catalog.CatalogValidationError` for mathematically invalid
content, raised by :func:`parse` only when no structure can be built at all
(non positive-definite metric); Jacobi and complex-structure failures are
left to :func:`~hktlie.catalog.validate_entry`.
"""

from __future__ import annotations

import json
import re

from . import linalg as la
from .catalog import CatalogEntry, CatalogValidationError, Expectation, validate_entry
from .constructions import QuatRep
from .errors import PreconditionError
from .geometry import GeomStructure, Metric
from .lie import LieAlgebra
from .scalar import Scalar, ScalarSyntaxError, parse_scalar

__all__ = ["FormatSyntaxError", "parse", "serialize", "load"]

FIELD_ORDER = (
    "name",
    "dim",
    "scalars",
    "description",
    "brackets",
    "metric",
    "complex",
    "connections",
    "quat_rep",
    "quat_reps",
    "endomorphisms",
    "parameters",
    "expected",
)
REQUIRED = ("name", "dim", "scalars", "brackets", "metric")
SCALARS = "Q(sqrt2)"


class FormatSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


# -- serialize -------------------------------------------------------------------------


def _lit(x) -> str:
    return x.literal() if isinstance(x, Scalar) else str(x)


def _grid(m) -> list:
    return [[_lit(x) for x in row] for row in m]


def _doc(entry: CatalogEntry) -> dict:
    s = entry.structure
    doc = {
        "name": entry.name,
        "dim": s.dim,
        "scalars": SCALARS,
    }
    if entry.description:
        doc["description"] = entry.description
    doc["brackets"] = [
        {"i": i + 1, "j": j + 1, "out": [{"k": k + 1, "c": _lit(c)} for k, c in sorted(row.items()) if c]}
        for (i, j), row in sorted(s.algebra.structure.items())
        if any(row.values())
    ]
    doc["metric"] = _grid(s.metric.gram)
    if s.complex:
        doc["complex"] = {f"J{a}": _grid(J) for a, J in enumerate(s.complex, 1)}
    if entry.connections:
        doc["connections"] = {name: [_grid(M) for M in C] for name, C in sorted(entry.connections.items())}
    if entry.quat_reps:
        doc["quat_reps"] = {
            name: {"q": r.q, "matrices": [_grid(M) for M in r.matrices]} for name, r in sorted(entry.quat_reps.items())
        }
    if entry.endomorphisms:
        doc["endomorphisms"] = {name: _grid(M) for name, M in sorted(entry.endomorphisms.items())}
    if entry.parameters:
        doc["parameters"] = dict(sorted(entry.parameters.items()))
    if entry.expected:
        recs = []
        for e in entry.expected:
            rec = {"key": e.key, "value": e.value, "source": e.source, "note": e.note}
            if e.discrepancy:
                rec["discrepancy"] = e.discrepancy
            recs.append(rec)
        doc["expected"] = recs
    return doc


def _nested(obj) -> bool:
    """True for containers holding a list of lists (matrices)."""
    if isinstance(obj, list):
        return any(isinstance(x, list) or _nested(x) for x in obj)
    if isinstance(obj, dict):
        return any(_nested(v) or (isinstance(v, list) and v and isinstance(v[0], list)) for v in obj.values())
    return False


def _dump(obj, indent: int) -> str:
    flat = json.dumps(obj, ensure_ascii=False)
    if not isinstance(obj, (list, dict)) or (not _nested(obj) and len(flat) + indent <= 100):
        return flat
    pad = " " * (indent + 2)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        body = ",\n".join(pad + _dump(x, indent + 2) for x in obj)
        return "[\n" + body + "\n" + " " * indent + "]"
    body = ",\n".join(f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 2)}" for k, v in obj.items())
    return "{\n" + body + "\n" + " " * indent + "}"


def serialize(entry: CatalogEntry) -> str:
    """Canonical text of ``entry``; identical entries give identical bytes."""
    return _dump(_doc(entry), 0) + "\n"


# -- parse -----------------------------------------------------------------------------


class _Doc:
    """Parsed document plus the raw text, for locating schema errors."""

    def __init__(self, text: str):
        self.text = text

    def locate(self, needle: str) -> tuple[int, int]:
        m = re.search(re.escape(needle), self.text)
        if not m:
            return 0, 0
        before = self.text[: m.start()]
        return before.count("\n") + 1, m.start() - (before.rfind("\n") + 1) + 1

    def fail(self, message: str, needle: str | None = None):
        line, col = self.locate(needle) if needle else (0, 0)
        raise FormatSyntaxError(message, line, col)

    def scalar(self, value, where: str) -> Scalar:
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            self.fail(f"{where}: scalar must be a string literal", json.dumps(value) if value is not None else None)
        try:
            return parse_scalar(str(value))
        except ScalarSyntaxError as exc:
            self.fail(f"{where}: {exc}", json.dumps(value))

    def integer(self, value, where: str, lo: int = 1, hi: int | None = None) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(f"{where}: expected an integer", json.dumps(value))
        if value < lo or (hi is not None and value > hi):
            self.fail(f"{where}: {value} out of range {lo}..{hi}", json.dumps(value))
        return value

    def grid(self, value, n: int, where: str):
        if not isinstance(value, list) or len(value) != n or any(not isinstance(r, list) or len(r) != n for r in value):
            self.fail(f"{where}: expected a {n}x{n} matrix", f'"{where.split(".")[-1]}"' if "." in where else None)
        return tuple(tuple(self.scalar(x, where) for x in row) for row in value)


def _read(text: str) -> dict:
    if not text.strip():
        raise FormatSyntaxError("empty document", 1, 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise FormatSyntaxError("top level must be an object", 1, 1)
    return data


def parse(text: str) -> CatalogEntry:
    """Parse a document into an entry (no structural validation)."""
    data = _read(text)
    d = _Doc(text)
    for key in data:
        if key not in FIELD_ORDER:
            d.fail(f"unknown field {key!r}", json.dumps(key))
    for key in REQUIRED:
        if key not in data:
            raise FormatSyntaxError(f"missing field {key!r}", 1, 1)
    name = data["name"]
    if not isinstance(name, str) or not name:
        d.fail("name must be a non-empty string", '"name"')
    n = d.integer(data["dim"], "dim")
    if data["scalars"] != SCALARS:
        d.fail(f"scalars must be {SCALARS!r}", '"scalars"')

    brackets = {}
    if not isinstance(data["brackets"], list):
        d.fail("brackets must be a list", '"brackets"')
    for rec in data["brackets"]:
        if not isinstance(rec, dict) or set(rec) != {"i", "j", "out"} or not isinstance(rec["out"], list):
            d.fail("bracket record needs exactly i, j, out", '"brackets"')
        i = d.integer(rec["i"], "brackets.i", 1, n)
        j = d.integer(rec["j"], "brackets.j", 1, n)
        if i >= j:
            d.fail(f"bracket [e{i}, e{j}] must have i < j", f'"i": {i}, "j": {j}')
        if (i - 1, j - 1) in brackets:
            d.fail(f"bracket [e{i}, e{j}] listed twice", f'"i": {i}, "j": {j}')
        out = {}
        for term in rec["out"]:
            if not isinstance(term, dict) or set(term) != {"k", "c"}:
                d.fail("bracket term needs exactly k, c", '"out"')
            k = d.integer(term["k"], "brackets.out.k", 1, n)
            out[k - 1] = d.scalar(term["c"], f"[e{i}, e{j}]")
        brackets[(i - 1, j - 1)] = out
    algebra = LieAlgebra(n, brackets)

    gram = d.grid(data["metric"], n, "metric")
    try:
        metric = Metric(gram)
    except PreconditionError as exc:
        raise CatalogValidationError(f"{name}: {exc}") from None

    cx = ()
    if "complex" in data:
        c = data["complex"]
        if not isinstance(c, dict) or "J1" not in c or set(c) - {"J1", "J2", "J3"}:
            d.fail("complex needs J1 and optionally J2, J3", '"complex"')
        if "J3" in c and "J2" not in c:
            d.fail("J3 given without J2", '"J3"')
        mats = [d.grid(c[k], n, f"complex.{k}") for k in ("J1", "J2", "J3") if k in c]
        if len(mats) == 2:
            mats.append(la.matmul(mats[0], mats[1]))
        cx = tuple(mats)

    def named(field, build):
        out = {}
        value = data.get(field, {})
        if not isinstance(value, dict):
            d.fail(f"{field} must be an object", json.dumps(field))
        for key, v in value.items():
            out[key] = build(key, v)
        return out

    def connection(key, v):
        if not isinstance(v, list) or len(v) != n:
            d.fail(f"connection {key!r} needs {n} matrices", json.dumps(key))
        return tuple(d.grid(M, n, f"connections.{key}") for M in v)

    def quat(key, v):
        if not isinstance(v, dict) or set(v) != {"q", "matrices"}:
            d.fail(f"representation {key!r} needs exactly q, matrices", json.dumps(key))
        q = d.integer(v["q"], f"quat_reps.{key}.q")
        if not isinstance(v["matrices"], list) or len(v["matrices"]) != n:
            d.fail(f"representation {key!r} needs {n} matrices", json.dumps(key))
        return QuatRep(q, tuple(d.grid(M, 4 * q, f"quat_reps.{key}") for M in v["matrices"]))

    connections = named("connections", connection)
    quat_reps = named("quat_reps", quat)
    if "quat_rep" in data:
        if "rho" in quat_reps:
            d.fail("quat_rep clashes with quat_reps entry 'rho'", '"quat_rep"')
        quat_reps["rho"] = quat("rho", data["quat_rep"])
    endos = named("endomorphisms", lambda key, v: d.grid(v, n, f"endomorphisms.{key}"))
    params = named("parameters", lambda key, v: str(d.scalar(v, f"parameters.{key}")))

    expected = []
    for rec in data.get("expected", []):
        if not isinstance(rec, dict) or not {"key", "value", "source"} <= set(rec) or set(rec) - {"key", "value", "source", "note", "discrepancy"}:
            d.fail("expected record needs key, value, source (note, discrepancy optional)", '"expected"')
        try:
            expected.append(Expectation(rec["key"], rec["value"], rec["source"], rec.get("note", ""), rec.get("discrepancy", "")))
        except ValueError as exc:
            d.fail(str(exc), json.dumps(rec["source"]))

    return CatalogEntry(
        name,
        GeomStructure(algebra, metric, cx),
        connections=connections,
        quat_reps=quat_reps,
        endomorphisms=endos,
        parameters=params,
        expected=tuple(expected),
        description=data.get("description", ""),
    )


def load(text: str) -> CatalogEntry:
    """:func:`parse` followed by full structural validation."""
    entry = parse(text)
    validate_entry(entry)
    return entry
