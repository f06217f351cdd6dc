import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hktlie.catalog import BUILTIN_NAMES, builtin
from hktlie.classify import Report, classify
from hktlie.cli import main
from hktlie.constructions import iterate_tangent, tangent_algebra
from hktlie.fileformat import load, serialize

DATA = Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_list():
    code, text = run("list")
    assert code == 0
    assert [line.split()[0] for line in text.splitlines()] == list(BUILTIN_NAMES)


def test_check_valid_builtin():
    code, text = run("check", "builtin:heis8")
    assert code == 0
    assert "PASS  jacobi" in text and "representation rho1" in text
    assert text.rstrip().endswith("heis8: valid")


def test_check_reports_jacobi_witness():
    code, text = run("check", str(DATA / "truncated_brackets.json"))
    assert code == 1
    assert "FAIL  jacobi" in text and "e1, e2, e3" in text


def test_check_reports_non_flat_connection(tmp_path):
    doc = json.loads(serialize(builtin("sp1_u1")))
    doc["connections"]["D"] = [doc["endomorphisms"][k] for k in ("J'1", "J'2", "J'3")] + [doc["connections"]["D"][3]]
    path = tmp_path / "nonflat.json"
    path.write_text(json.dumps(doc))
    code, text = run("check", str(path))
    assert code == 1
    assert "FAIL  connection D flat: R(e1, e2) != 0" in text
    code, _ = run("construct", "tangent", str(path), "D")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("check", str(DATA / "bad_scalar.json")),
        ("check", "builtin:nope"),
        ("check", "/nonexistent/file.json"),
        ("report",),
        ("frobnicate",),
        (),
        ("construct", "tangent", "builtin:sp1_u1", "nope"),
        ("construct", "rho", "builtin:heis8", "D"),
        ("construct", "sideways", "builtin:sp1_u1", "D"),
        ("verify-paper", "--case", "nope"),
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_empty_file_is_a_parse_error(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    assert run("check", str(p))[0] == 2
    assert run("report", str(p))[0] == 2


def test_report_text():
    code, text = run("report", "builtin:e2_tangent")
    assert code == 0
    assert "c = 2*e^{256}" in text
    assert "dc = -4*e^{1256}" in text
    assert "theta = 2*e^{1}" in text
    assert "dstar_c = 0" in text


def test_report_json_and_text_agree():
    code, js = run("report", "--json", "builtin:su21_tangent")
    assert code == 0
    rep = Report.from_dict(json.loads(js))
    assert rep.forms == classify(builtin("su21_tangent").structure).forms
    _, text = run("report", "--text", "builtin:su21_tangent")
    assert rep.to_text().splitlines()[1:] == text.splitlines()[1:]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_report_dict_round_trip(name):
    rep = classify(builtin(name).structure, name)
    assert Report.from_dict(json.loads(rep.to_json())) == rep


def test_report_is_deterministic():
    assert run("report", "--json", "builtin:heis8_rho12") == run("report", "--json", "builtin:heis8_rho12")


def test_report_not_applicable_fields():
    _, js = run("report", "--json", "builtin:e2_central")
    data = json.loads(js)
    assert data["flags"]["hkt"] is None and data["flags"]["kahler"] is True
    _, text = run("report", "builtin:e2_central")
    assert "hkt" in text and "n/a" in text


def test_report_rejects_invalid_algebra():
    assert run("report", str(DATA / "truncated_brackets.json"))[0] == 1


def test_construct_rho_matches_catalog():
    code, text = run("construct", "rho", "builtin:heis8", "rho1")
    assert code == 0
    e = load(text)
    assert e.name == "heis8_rho1"
    assert e.structure == builtin("heis8_rho12").structure


def test_construct_kaehler_double_matches_catalog():
    code, text = run("construct", "kaehler-double", "builtin:e2_central", "D")
    assert code == 0
    assert load(text).structure == builtin("e2_tangent").structure


def test_construct_tangent_to_file_and_chain(tmp_path):
    first = tmp_path / "t1.json"
    code, msg = run("construct", "tangent", "builtin:sp1_u1", "D", "--out", str(first))
    assert code == 0 and "dim 8" in msg
    t1 = load(first.read_text())
    e = builtin("sp1_u1")
    assert t1.structure == tangent_algebra(e.structure, e.connections["D"])
    code, text = run("construct", "tangent", str(first), "D_lift")
    assert code == 0
    assert load(text).structure == iterate_tangent(t1.structure, e.connections["D"])
    code, text2 = run("construct", "iterate", "builtin:sp1_u1", "D")
    assert code == 0
    assert load(text2).structure == load(text).structure


def test_construct_precondition_failure_exits_1():
    assert run("construct", "tangent", "builtin:e2_central", "D")[0] == 1


def test_verify_single_case_passes():
    code, text = run("verify-paper", "--case", "e2_tangent")
    assert code == 0
    assert text.startswith("[1] PASS")
    assert text.rstrip().endswith("1/1 criteria passed")


def test_verify_case_without_criterion_uses_its_expectations():
    code, text = run("verify-paper", "--case", "alg3")
    assert code == 0
    assert "alg3.weak" in text


def test_verify_reports_documented_discrepancy():
    code, text = run("verify-paper", "--case", "su21_tangent")
    assert code == 1
    assert "[2] FAIL" in text
    assert "documented discrepancy" in text
    fails = [line for line in text.splitlines() if line.strip().startswith("FAIL")]
    assert {line.split(":")[0].split()[-1] for line in fails} == {"su21_tangent.c", "su21_tangent.theta"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hktlie", "list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "heis8_rho12" in proc.stdout
