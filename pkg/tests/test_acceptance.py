"""Acceptance criteria, evaluated exactly.

Each criterion prints one ``[n] PASS|FAIL`` line (collected again in the
terminal summary).  A criterion fails only through rows whose published
value carries a documented discrepancy; those rows are strict xfails, so a
future fix shows up as XPASS.  Run directly for the summary alone:
``python3 tests/test_acceptance.py``.
"""

import functools

import pytest

from hktlie.verify import CRITERIA

RESULTS: dict = {}

# (criterion, row label) for published values the engine cannot reproduce
DOCUMENTED = {
    (2, "su21_tangent.c"),
    (2, "su21_tangent.theta"),
    (3, "sp1u1_tangent.bracket[e3,e7]"),
}


@functools.lru_cache(maxsize=None)
def rows_of(number: int) -> tuple:
    crit = next(c for c in CRITERIA if c.number == number)
    return tuple(crit.run())


def summary_line(crit) -> str:
    rows = rows_of(crit.number)
    passed = sum(r.ok for r in rows)
    status = "PASS" if passed == len(rows) else "FAIL"
    return f"[{crit.number}] {status}  {crit.title} ({passed}/{len(rows)} checks)"


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda c: f"criterion_{c.number}")
def test_criterion(crit):
    line = summary_line(crit)
    RESULTS[crit.number] = line
    print(line)
    rows = rows_of(crit.number)
    assert rows
    undocumented = [r.line() for r in rows if not r.ok and not r.discrepancy]
    assert not undocumented, "\n".join(undocumented)


@pytest.mark.parametrize(
    "number, label",
    [pytest.param(n, lbl, marks=pytest.mark.xfail(strict=True, reason="documented discrepancy in the published value"), id=lbl)
     for n, lbl in sorted(DOCUMENTED)],
)
def test_documented_discrepancy(number, label):
    (row,) = [r for r in rows_of(number) if r.label == label]
    assert row.discrepancy
    assert row.ok, row.line()


def test_failures_are_exactly_the_documented_ones():
    failing = {(c.number, r.label) for c in CRITERIA for r in rows_of(c.number) if not r.ok}
    assert failing == DOCUMENTED


if __name__ == "__main__":
    for c in CRITERIA:
        print(summary_line(c))
