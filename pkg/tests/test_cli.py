import json

import pytest

from xortho.algebra import MultiPoly
from xortho.classical import HahnParams
from xortho.cli import main, parse_range, parse_rational
from xortho.combinatorics import PairF
from xortho.xhahn import XHahnFamily

HAHN = ["--alpha", "0", "--beta", "2", "--N", "5", "--F", "F1=;F2=1"]


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_helpers():
    assert parse_range("3") == [3]
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("1,2,5") == [1, 2, 5]
    assert str(parse_rational("-7/2")) == "-7/2"


def test_gen_json_round_trip(capsys):
    code, out = run(capsys, "gen", "xhahn", *HAHN, "--n", "1..4", "--format", "json", "--allow-degenerate")
    assert code == 0
    doc = json.loads(out.out)
    assert doc["schema"] == "xortho/1" and doc["family"] == "xhahn"
    assert [p["n"] for p in doc["polynomials"]] == [1, 2, 3, 4]
    fam = XHahnFamily(HahnParams(0, 2, 5), PairF((), (1,)), strict=False)
    for entry in doc["polynomials"]:
        assert MultiPoly.from_json(entry["poly"]) == fam.x_hahn(entry["n"])
    assert MultiPoly.from_json(doc["omega"]) == fam.omega


def test_gen_operator(capsys):
    code, out = run(capsys, "gen", "xjacobi", "--alpha", "1/2", "--beta", "7/3", "--F", "F1=;F2=1", "--operator")
    assert code == 0 and "operator" in json.loads(out.out)


def test_usage_errors(capsys):
    assert run(capsys, "gen", "xhahn", "--alpha", "0", "--beta", "1", "--N", "3", "--F", "")[0] == 1
    assert run(capsys, "gen", "xhahn", "--alpha", "0.5", "--beta", "1", "--N", "3", "--F", "F1=1")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1


def test_degenerate_parameters_exit_2(capsys):
    code, out = run(capsys, "verify", "xhahn", *HAHN)
    assert code == 2 and "alpha - beta is a negative integer" in out.err


def test_verify_all_degenerate_example(capsys):
    code, out = run(capsys, "verify", "xhahn", *HAHN[:5], "6", *HAHN[6:], "--allow-degenerate")
    assert code == 0
    doc = json.loads(out.out)
    assert {c["status"] for c in doc["checks"]} <= {"PASS", "SKIP"}


def test_verify_jacobi_all(capsys):
    code, out = run(capsys, "verify", "xjacobi", "--alpha", "1/2", "--beta", "7/3", "--F", "F1=;F2=1")
    assert code == 0
    suites = {c["suite"] for c in json.loads(out.out)["checks"]}
    assert {"eigen", "limit", "boundary", "recurrence"} <= suites


def test_expected_negative_fixture(capsys):
    argv = ["verify", "xhahn", "--alpha", "-7/2", "--beta", "9", "--N", "20", "--F", "F1=1;F2=", "--suite", "admissible"]
    code, out = run(capsys, *argv, "--expect", "not-admissible")
    assert code == 0
    code, out = run(capsys, *argv, "--expect", "admissible")
    assert code == 4


def test_corrupted_upsilon_fails(capsys):
    argv = ["verify", "xhahn", "--alpha", "1/2", "--beta", "7/3", "--N", "8", "--F", "F1=;F2=1", "--suite", "recurrence"]
    assert run(capsys, *argv)[0] == 0
    code, out = run(capsys, *argv, "--upsilon", "x**2+x")
    assert code == 4
    doc = json.loads(out.out)
    assert any("inconsistent_row" in c for c in doc["checks"] if c["status"] == "FAIL")


def test_recurrence_table_csv(capsys):
    code, out = run(
        capsys, "recurrence-table", "xjacobi", "--alpha", "1/2", "--beta", "7/3", "--F", "F1=;F2=1", "--n", "3,4", "--format", "csv"
    )
    assert code == 0
    lines = out.out.strip().splitlines()
    assert lines[0] == "n,j,numerator,denominator" and len(lines) == 11


def test_recurrence_table_normalization_and_fit(capsys):
    code, out = run(
        capsys, "recurrence-table", "xhahn", "--alpha", "1/2", "--beta", "7/3", "--N", "30", "--F", "F1=;F2=1",
        "--n", "3..6", "--normalization", "n",
    )
    assert code == 0 and json.loads(out.out)["order"] == 5


def test_admissible_command(capsys):
    code, out = run(capsys, "admissible", "xjacobi", "--alpha", "0", "--beta", "1/2", "--F", "F1=;F2=1")
    assert code == 0
    doc = json.loads(out.out)
    assert doc["verdict"] == "NotAdmissible" and doc["witness"] is not None


def test_limit_check(capsys):
    code, out = run(capsys, "limit-check", "--alpha", "1/2", "--beta", "7/3", "--F", "F1=;F2=1", "--n", "1..3")
    assert code == 0


def test_fixture_runner_reports_single_failure(capsys):
    code, out = run(capsys, "verify", "--fixture")
    assert code == 4
    doc = json.loads(out.out)
    failed = [r["name"] for r in doc["fixtures"] if r["status"] == "FAIL"]
    assert failed == ["hahn-not-admissible-minus-7-2"]


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("XORTHO_THREADS", "3")
    code, _ = run(capsys, "verify", "xjacobi", "--alpha", "1/2", "--beta", "7/3", "--F", "F1=;F2=1", "--suite", "eigen")
    assert code == 0
