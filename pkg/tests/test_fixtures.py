import pytest

from xortho.fixtures import load, run_all, run_case

CASES = load()


def test_fixture_file_shape():
    names = [c["name"] for c in CASES]
    assert len(names) == len(set(names)) >= 20


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_fixture(case):
    ok, detail = run_case(case)
    assert ok, detail


def test_run_all_filters_by_name():
    out = run_all(names=["w-of-empty-one"])
    assert [r["name"] for r in out] == ["w-of-empty-one"] and out[0]["status"] == "PASS"
