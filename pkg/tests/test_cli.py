import json

import pytest

from grdb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_porb(capsys):
    code, out, _ = run(capsys, "porb", "--r", "8", "--weights", "3,5,7", "--k", "1")
    assert code == 0
    assert json.loads(out)["numerator"] == "-3t^3-2t^4-t^5-3t^6-t^7-2t^8-3t^9"


def test_porb_expansion(capsys):
    _, out, _ = run(capsys, "porb", "--r", "2", "--weights", "1,1,1", "--order", "6")
    assert json.loads(out)["expansion"] == [0, 0, 0, -1, -3, -7, -13]


def test_format(capsys):
    code, out, _ = run(capsys, "format", "--family", "gr25", "--w", "0,1,1,1,1")
    d = json.loads(out)
    assert code == 0 and d["equation_degrees"] == "3,3,3,3,4" and d["adjunction"] == 8


def test_format_needs_grading(capsys):
    code, _, err = run(capsys, "format", "--family", "ogr510", "--w", "0,0,0,0,0")
    assert code == 1 and "--u" in err


def test_invariants_from_chi(capsys):
    _, out, _ = run(capsys, "invariants", "--basket", "1/2(1,1,1)", "--chi", "-4")
    assert json.loads(out)["Kc2"] == "195/2"


def test_invariants_from_weights(capsys):
    code, out, _ = run(capsys, "invariants", "--family", "gr25", "--w", "0,1,1,1,1", "--weights", "1,1,1,1,1,1,1")
    d = json.loads(out)
    assert code == 0 and d["K3"] == "20" and d["chi"] == -6


def test_inconsistent_basket_exit_code(capsys):
    code, _, err = run(capsys, "invariants", "--family", "gr25", "--w", "0,1,1,1,1", "--weights", "1,1,1,1,1,1,1",
                       "--basket", "1/2(1,1,1)")
    assert code == 3 and "inconsistency" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["search", "--family", "bogus"])
    assert e.value.code == 1
    code, _, _ = run(capsys, "search", "--family", "gr25", "--jobs", "0")
    assert code == 1


def test_search_and_verify(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    rep = tmp_path / "rep.json"
    code, _, err = run(capsys, "search", "--family", "gr25", "--max-adjunction", "12", "--out", str(out),
                       "--report", str(rep))
    assert code == 0
    assert json.loads(rep.read_text()) == json.loads(err)
    code, text, _ = run(capsys, "verify", "--table", "table1", "--results", str(out))
    assert code == 2 and "missing row" in text


def test_search_csv(capsys):
    code, out, _ = run(capsys, "search", "--family", "ci", "--codim", "1", "--k", "1", "--max-adjunction", "8",
                       "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("family,params")


def test_verify_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--table", "table1", "--results", str(tmp_path / "nope"))
    assert code == 1


def test_kernels(capsys):
    _, out, _ = run(capsys, "kernels", "--k", "0", "--max-index", "6", "--cap", "6")
    assert ["1*1/3(1,1,1)", "1*1/3(2,2,2)"] in json.loads(out)["kernels"]
