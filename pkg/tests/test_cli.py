import json

import pytest

from diffpi.cli import main

UT2EPS_GENS_FILE = """\
# generators of the UT2eps identity ideal
[x1,x2]^eps - [x1,x2]
x1^eps*x2^eps   # trailing comment
x1^epseps - x1^eps
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


def test_validate_ut2eps(capsys):
    code, rep, err = run_json(capsys, "validate", "UT2eps")
    assert code == 0
    assert rep["tool"] == "diffpi"
    assert rep["command"] == "validate"
    assert rep["results"]["l_semisimple"] is False
    assert all(row["ok"] for row in rep["results"]["rows"])
    assert any("not semisimple" in w for w in rep["warnings"])


def test_validate_m2sl2_semisimple(capsys):
    code, rep, err = run_json(capsys, "validate", "M2sl2")
    assert code == 0
    assert rep["results"]["l_semisimple"] is True
    assert rep["warnings"] == []


def test_validate_non_associative_file(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({
        "dim": 2, "basis": ["a", "b"],
        "table": [[0, 0, [[1, 1]]], [1, 1, [[0, 1]]],
                  [0, 1, [[0, 1]]], [1, 0, [[1, 1]]]]}))
    code, rep, err = run_json(capsys, "validate", str(f))
    assert code == 2
    rows = {r["check"]: r for r in rep["results"]["rows"]}
    assert rows["associativity"]["ok"] is False
    assert rows["associativity"]["witness"] == ["a", "a", "a"]


def test_validate_leibniz_failure(capsys, tmp_path):
    f = tmp_path / "nl.json"
    f.write_text(json.dumps({
        "dim": 2, "basis": ["u", "b"],
        "table": [[0, 0, [[0, 1]]], [0, 1, [[1, 1]]], [1, 0, [[1, 1]]]],
        "unit": [1, 0],
        "derivations": [{"name": "d", "matrix": [[1, 0], [0, 0]]}]}))
    code, rep, err = run_json(capsys, "validate", str(f))
    assert code == 2
    rows = {r["check"]: r for r in rep["results"]["rows"]}
    assert rows["leibniz: d"]["ok"] is False
    # computing on the same file fails with the invariant exit code
    code, out, err = run(capsys, "codim", str(f))
    assert code == 2
    assert "Leibniz" in err


def test_codim_formula_flags(capsys):
    code, rep, err = run_json(capsys, "codim", "UT2eps", "--max-n", "2",
                              "--formula")
    assert code == 0
    rows = rep["results"]["rows"]
    assert [r["c_n_L"] for r in rows] == [2, 5]
    assert [r["c_n"] for r in rows] == [1, 2]
    assert [r["formula"] for r in rows] == [0, 3]
    assert all(r["flag"] == "MISMATCH" for r in rows)
    assert any("disagrees" in w for w in rep["warnings"])


def test_codim_ordinary_flag(capsys):
    code, rep, err = run_json(capsys, "codim", "Fn(1)", "--max-n", "4",
                              "--ordinary")
    assert code == 0
    assert [r["c_n"] for r in rep["results"]["rows"]] == [1, 1, 1, 1]
    assert "c_n_L" not in rep["results"]["rows"][0]


def test_codim_budget_prints_completed_rows(capsys):
    code, rep, err = run_json(capsys, "codim", "UT2eps", "--max-n", "5",
                              "--budget", "1000")
    assert code == 4
    assert [r["n"] for r in rep["results"]["rows"]] == [1, 2]
    assert any("budget exceeded at n = 3" in w for w in rep["warnings"])


def test_cocharacter_report(capsys):
    code, rep, err = run_json(capsys, "cocharacter", "UT2eps", "--n", "2")
    assert code == 0
    rows = rep["results"]["rows"]
    assert rows == [
        {"lambda": [2], "m_L": 3, "m": 1, "depth": 0},
        {"lambda": [1, 1], "m_L": 2, "m": 1, "depth": 1},
    ]
    assert rep["results"]["colength_L"] == 5
    assert rep["results"]["colength"] == 2


def test_exponent_and_witness(capsys):
    code, rep, err = run_json(capsys, "exponent", "UT2eps")
    assert code == 0
    assert rep["results"]["exponent"] == 2
    assert rep["results"]["witness"]["element"] == ["0", "0", "1"]
    code, rep, err = run_json(capsys, "exponent", "Fn(1)+Fn(1)")
    assert rep["results"]["exponent"] == 1
    assert rep["results"]["polynomial_growth"] is True
    assert rep["results"]["witness"] is None


def test_classify_report(capsys):
    code, rep, err = run_json(capsys, "classify", "UT2eps",
                              "--cocharacter-depth", "2")
    assert code == 0
    res = rep["results"]
    assert res["exponent"] == 2
    assert res["polynomial_growth"] is False
    assert res["conditions"]["codim_evidence"]["values"] == [2, 5]
    assert res["hypothesis_flags"]["action_semisimple"] is False
    assert any("not semisimple" in w for w in rep["warnings"])


def test_check_identity_verdicts(capsys):
    code, rep, err = run_json(
        capsys, "check-identity", "UT2eps",
        "--poly", "[x1,x2]^eps - [x1,x2]",
        "--poly", "x1^eps*x2",
        "--poly", "[x1,x2]")
    assert code == 0
    verdicts = [r["identity"] for r in rep["results"]["rows"]]
    assert verdicts == [True, False, False]


def test_consequences_cross_check(capsys, tmp_path):
    g = tmp_path / "gens.txt"
    g.write_text(UT2EPS_GENS_FILE)
    code, rep, err = run_json(capsys, "consequences", "UT2eps",
                              "--gens", str(g), "--n", "2", "--check")
    assert code == 0
    res = rep["results"]
    assert res["space_dim"] == 8
    assert res["ideal_dim"] == 3
    assert res["quotient_dim"] == 5
    assert res["codim_check"] == {"c_n_L": 5, "agree": True}


def test_consequences_incomplete_generators_warn(capsys, tmp_path):
    g = tmp_path / "gens.txt"
    g.write_text("x1^eps*x2^eps\n")
    code, rep, err = run_json(capsys, "consequences", "UT2eps",
                              "--gens", str(g), "--n", "2", "--check")
    assert code == 0
    assert rep["results"]["codim_check"]["agree"] is False
    assert any("do not span" in w for w in rep["warnings"])


def test_decompose_report(capsys):
    code, rep, err = run_json(capsys, "decompose", "UT2eps")
    assert code == 0
    res = rep["results"]
    assert res["block_dims"] == [1, 1]
    assert res["nilpotency_index"] == 2
    assert res["radical_basis"] == [["0", "0", "1"]]
    assert res["radical_path_graph"] == [[0, 1]]
    d = res["derivations"][0]
    assert d["name"] == "eps" and d["outer_zero"] is True


def test_exit_code_usage_errors(capsys):
    assert main(["codim", "nosuchinput"]) == 1
    capsys.readouterr()
    assert main(["check-identity", "UT2eps", "--poly", "x1^zeta"]) == 1
    capsys.readouterr()
    assert main(["check-identity", "UT2eps", "--poly", "x1*x1"]) == 1
    capsys.readouterr()
    assert main([]) == 1
    capsys.readouterr()
    assert main(["--version"]) == 0
    capsys.readouterr()
    assert main(["codim", "UT2eps", "--max-n", "0"]) == 1
    capsys.readouterr()


def test_exit_code_nonsplit(capsys, tmp_path):
    f = tmp_path / "qi.json"
    f.write_text(json.dumps({
        "dim": 2, "basis": ["one", "t"], "unit": [1, 0],
        "table": [[0, 0, [[0, 1]]], [0, 1, [[1, 1]]],
                  [1, 0, [[1, 1]]], [1, 1, [[0, -1]]]]}))
    code, out, err = run(capsys, "decompose", str(f))
    assert code == 3
    assert "hint" in err


def test_algebra_file_schema_errors(capsys, tmp_path):
    cases = [
        ("notjson", "{nope"),
        ("float", json.dumps({"dim": 1, "basis": ["x"],
                              "table": [[0, 0, [[0, 0.5]]]]})),
        ("badindex", json.dumps({"dim": 1, "basis": ["x"],
                                 "table": [[0, 2, [[0, 1]]]]})),
        ("unitlen", json.dumps({"dim": 2, "basis": ["x", "y"],
                                "table": [], "unit": [1]})),
        ("unknown", json.dumps({"dim": 1, "basis": ["x"], "table": [],
                                "extra": 1})),
        ("dupcell", json.dumps({"dim": 1, "basis": ["x"],
                                "table": [[0, 0, [[0, 1]]],
                                          [0, 0, [[0, 1]]]]})),
    ]
    for name, text in cases:
        f = tmp_path / f"{name}.json"
        f.write_text(text)
        code, out, err = run(capsys, "validate", str(f))
        assert code == 1, name
        assert err.startswith("error:"), name


def test_builtin_inside_file(capsys, tmp_path):
    f = tmp_path / "bi.json"
    f.write_text(json.dumps({"builtin": "M2sl2"}))
    code, rep, err = run_json(capsys, "exponent", str(f))
    assert code == 0
    assert rep["results"]["exponent"] == 4


def test_json_byte_determinism(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code = main(["cocharacter", "UT2eps", "--n", "2",
                     "--format", "json", "--out", str(path)])
        assert code == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_csv_matches_json_content(capsys):
    code, rep, err = run_json(capsys, "codim", "UT2eps", "--max-n", "2")
    code, out, err = run(capsys, "codim", "UT2eps", "--max-n", "2",
                         "--format", "csv")
    assert code == 0
    lines = dict(line.split(",", 1) for line in out.strip().splitlines()[1:])
    for i, row in enumerate(rep["results"]["rows"]):
        for key, val in row.items():
            assert lines[f"rows.{i}.{key}"] == str(val)


def test_table_format_headers(capsys):
    code, out, err = run(capsys, "codim", "UT2eps", "--max-n", "2",
                         "--formula")
    assert code == 0
    assert "MISMATCH" in out
    assert "c_n_L" in out
    assert "warnings:" in out


def test_file_and_builtin_digests_differ(capsys, tmp_path):
    code, rep1, err = run_json(capsys, "validate", "UT2eps")
    f = tmp_path / "ut.json"
    f.write_text(json.dumps({"builtin": "UT2eps"}))
    code, rep2, err = run_json(capsys, "validate", str(f))
    assert rep1["input"]["sha256"] != rep2["input"]["sha256"]
    assert rep1["results"] == rep2["results"]
