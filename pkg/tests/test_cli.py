from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from lievar.cli import main
from lievar.construction import build_A, build_C
from lievar.identities import check_identity, parse_poly
from lievar.serialize import FormatError, dumps_algebra, load_algebra, loads_algebra


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(list(argv) + ["--json"], capsys)
    return code, json.loads(out), out


@pytest.fixture(scope="module")
def c1_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("alg") / "C1.json"
    assert main(["export", "--construction", "C", "--p", "2", "--n", "1", "--out", str(path)]) == 0
    return path


def test_verify_command_p2_n1(capsys):
    code, rep, _ = run_json(["verify-theorem1", "--p", 2, "--n", 1], capsys)
    assert code == 0
    claims = {c["claim_id"]: c for c in rep["claims"]}
    eq4 = claims["thm1.eq4.k=1"]
    assert eq4["status"] == "refuted" and eq4["expected"] == "refuted" and eq4["matches"]
    assert eq4["witness"]["value"] == "b(2)"
    before_eq4 = [c for c in rep["claims"] if not c["claim_id"].startswith("thm1.eq4")]
    assert len(before_eq4) == 11 and all(c["status"] == "verified" for c in before_eq4)
    assert rep["parameters"]["seed"] == 0


def test_verify_command_independence_pattern(capsys):
    code, rep, _ = run_json(["verify-theorem1", "--p", 2, "--n", 2, "--kmax", 6], capsys)
    assert code == 0
    status = {c["claim_id"]: c["status"] for c in rep["claims"]}
    assert [status[f"thm1.eq4.k={k}"] for k in range(1, 7)] == ["verified", "refuted"] + ["verified"] * 4


def test_verify_command_cap(capsys):
    code, _, err = run(["verify-theorem1", "--p", 7, "--n", 5], capsys)
    assert code == 2 and "cap" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-theorem1", "--p", "4", "--n", "1"],
        ["verify-theorem1", "--p", "2"],
        ["verify-theorem1", "--p", "2", "--n", "0"],
        ["verify-theorem1", "--p", "2", "--n", "1", "--interp", "even"],
        ["verify-theorem1", "--p", "2", "--n", "1", "--method", "psychic"],
        ["verify-theorem1", "--p", "2", "--n", "1", "--seed", "-1"],
        ["ordinal", "--remark", "3", "--p", "2", "--rank", "1"],
        ["export", "--construction", "D", "--p", "2", "--n", "1", "--out", "x.json"],
        ["audit", "--p", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_bad_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_wrong_interpretation_exits_1(capsys):
    code, rep, _ = run_json(["verify-theorem1", "--p", 2, "--n", 1, "--interp", "odd,mu"], capsys)
    assert code == 1
    assert "thm1.eq4.k=1" in rep["summary"]["mismatches"]


def test_reports_byte_identical(capsys):
    argv = ["verify-theorem1", "--p", 2, "--n", 1, "--method", "random", "--seed", 7, "--trials", 200]
    _, _, first = run_json(argv, capsys)
    _, _, second = run_json(argv, capsys)
    assert first == second
    assert "elapsed_ms" not in first


def test_timings_flag(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify-theorem1", "--p", 2, "--n", 1, "--timings", "--out", out], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert all("elapsed_ms" in c for c in rep["claims"])


def test_check_examples(c1_file, capsys):
    code, rep, _ = run_json(["check", "--algebra", c1_file, "--poly", "x1 x2^6", "--method", "generic"], capsys)
    assert code == 0 and rep["claims"][0]["status"] == "verified"
    code, rep, _ = run_json(["check", "--algebra", c1_file, "--poly", "x1 x2"], capsys)
    assert code == 0
    claim = rep["claims"][0]
    assert claim["status"] == "refuted" and claim["witness"]["value"] != "0"


def test_check_expectation_mismatch(c1_file, capsys):
    code, _, _ = run(["check", "--algebra", c1_file, "--poly", "x1 x2", "--expect", "holds"], capsys)
    assert code == 1
    code, _, _ = run(["check", "--algebra", c1_file, "--poly", "x1 x2", "--expect", "fails"], capsys)
    assert code == 0


def test_check_poly_from_file(c1_file, tmp_path, capsys):
    f = tmp_path / "eq.txt"
    f.write_text("(x1 x2 x3)(x1 x2)\n")
    code, rep, _ = run_json(["check", "--algebra", c1_file, "--poly", f"@{f}"], capsys)
    assert code == 0 and rep["claims"][0]["status"] == "refuted"


@pytest.mark.parametrize("content", ["{}", "not json", '{"format": "sca-v1"}', "[1, 2]"])
def test_check_bad_algebra(content, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(content)
    code, _, err = run(["check", "--algebra", bad, "--poly", "x1 x2"], capsys)
    assert code == 2 and "error" in err


def test_check_missing_file_and_parse_error(c1_file, tmp_path, capsys):
    code, _, _ = run(["check", "--algebra", tmp_path / "nope.json", "--poly", "x1 x2"], capsys)
    assert code == 2
    code, _, err = run(["check", "--algebra", c1_file, "--poly", "x1 (x2"], capsys)
    assert code == 2 and "position" in err


def test_check_rejects_non_lie_table(tmp_path, capsys):
    d = json.loads(dumps_algebra(build_A(2, 1)))
    d["table"] = [e for e in d["table"] if e[0] < e[1]]  # drop one order
    bad = tmp_path / "half.json"
    bad.write_text(json.dumps(d))
    code, _, err = run(["check", "--algebra", bad, "--poly", "x1 x2"], capsys)
    assert code == 2 and "antisymmetry" in err


def test_ordinal_examples(capsys, tmp_path):
    code, rep, _ = run_json(["ordinal", "--remark", 5, "--p", 2, "--rank", 1, "--which", "both"], capsys)
    assert code == 0
    dims = rep["claims"][0]["dims"]
    assert dims["ordinal_v"] == 6 and dims["ordinal_w"] == 6
    table = tmp_path / "t.csv"
    code, rep, _ = run_json(["ordinal", "--remark", 5, "--p", 2, "--rank", 4, "--compare", "--csv", table], capsys)
    assert code == 0
    cmp = rep["claims"][1]
    assert cmp["details"]["verdict"] == "incomparable"
    assert cmp["dims"]["dim_tideal_v"] == cmp["dims"]["dim_tideal_w"]
    rows = list(csv.DictReader(table.open()))
    assert rows == [{"rank": "4", "dim_base": "329", "dim_tideal_v": "80", "dim_tideal_w": "80",
                     "ordinal_v": "249", "ordinal_w": "249"}]
    code, rep, _ = run_json(["ordinal", "--remark", 4, "--p", 2, "--rank", 2], capsys)
    assert code == 0
    dims = rep["claims"][0]["dims"]
    assert dims["ordinal_v"] == dims["ordinal_w"] == 114


def test_ordinal_single_variety(capsys):
    code, rep, _ = run_json(["ordinal", "--remark", 5, "--p", 2, "--rank", 1, 2, "--which", "base"], capsys)
    assert code == 0
    assert [c["dims"]["ordinal_base"] for c in rep["claims"]] == [7, 35]


def test_ordinal_out_of_reach_and_budget(capsys):
    code, _, err = run(["ordinal", "--remark", 5, "--p", 2, "--rank", 12], capsys)
    assert code == 2 and "cap" in err
    code, rep, _ = run_json(["ordinal", "--remark", 5, "--p", 2, "--rank", 4, "--budget", 0], capsys)
    assert code == 0 and rep["claims"][0]["status"] == "skipped"


def test_export_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, out, _ = run(["export", "--construction", "A", "--p", 2, "--n", 1, "--out", path], capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["dim"] == 9 and d["format"] == "sca-v1" and list(d) == sorted(d)
    keys = [(i, j) for i, j, _ in d["table"]]
    assert keys == sorted(keys) and all((j, i) in set(keys) for i, j in keys)


def test_round_trip_preserves_structure_and_verdicts(c1_file):
    C = build_C(2, 1)[0]
    L = load_algebra(c1_file)
    assert L.table == C.table and L.labels == C.labels and L.p == C.p and L.kind == C.kind
    for text in ("x1 x2^6", "x1 x2", "(x1 x2 x3)(x1 x2)", "(x1 x2)(x3 x4)"):
        f = parse_poly(text, 2)
        assert check_identity(L, f).status == check_identity(C, f).status


def test_round_trip_relatively_free():
    from lievar.tideal import Base, build_relatively_free

    A = build_relatively_free(Base("commutative", 4), 2, 3).algebra
    B = loads_algebra(dumps_algebra(A))
    assert B.table == A.table and B.kind == "commutative-associative"


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(p=4),
        lambda d: d.update(kind="jordan"),
        lambda d: d.update(dim=-1),
        lambda d: d.update(labels=d["labels"][:-1]),
        lambda d: d["table"].append([0, 99, [[0, 1]]]),
        lambda d: d["table"].append(d["table"][0]),
        lambda d: d["table"][0][2].append([0, 5]),
        lambda d: d["table"][0][2].append([0, 0]),
        lambda d: d.update(table="x"),
        lambda d: d.pop("labels"),
        lambda d: d.update(dim=True),
    ],
)
def test_format_errors(mutate):
    d = json.loads(dumps_algebra(build_A(2, 1)))
    mutate(d)
    with pytest.raises(FormatError):
        loads_algebra(json.dumps(d))


def test_audit(capsys):
    code, rep, _ = run_json(["audit", "--p", 2, "--n", 1], capsys)
    assert code == 0
    status = {c["claim_id"]: c["status"] for c in rep["claims"]}
    assert status["audit.interp=even,mu"] == "verified"
    row = {r["interp"]: r for r in rep["table"]}
    assert row["odd,mu"]["eq4_witness_k=n"] is False


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lievar", "verify-theorem1", "--p", "2", "--n", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "thm1.eq4.k=1" in res.stdout
