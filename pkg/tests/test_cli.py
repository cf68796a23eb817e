import json

import pytest

from selfcup.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_verify_core_z2(capsys):
    code, rep = run_json(capsys, "verify-core", "--grid", "Z2")
    assert code == 0 and rep["passed"]
    trivial = [r for r in rep["suites"]["selfcup"] if r["module"] == "F2"]
    assert trivial[0]["classes_checked"] == 2


def test_verify_core_default(capsys):
    code, rep = run_json(capsys, "verify-core")
    assert code == 0
    assert set(rep["suites"]) >= {"selfcup", "bockstein", "commutator", "duality", "cyclic_rank"}
    assert all(s["passed"] == s["cells"] for s in rep["summary"].values())


def test_corrupted_cup_fails_with_witness(capsys):
    code, rep = run_json(capsys, "verify-core", "--corrupt-cup", "--grid", "S3,D4")
    assert code == 1 and rep["first_failure"]["suite"] == "selfcup"


def test_report_is_stable(capsys):
    a = run(capsys, "verify-core", "--grid", "Z3,V4", "--json")[1]
    b = run(capsys, "verify-core", "--grid", "Z3,V4", "--json")[1]
    assert a == b


def test_unknown_grid_group(capsys):
    code, _, err = run(capsys, "verify-core", "--grid", "Z7")
    assert code == 2 and "unknown" in err


def test_module_file(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"n": 3, "generators": "(1 2 3)", "m": 2, "matrices": [[[0, 1], [1, 1]]]}))
    code, rep = run_json(capsys, "verify-core", "--grid", "Z2", "--module", str(p))
    assert code == 0
    assert rep["suites"]["selfcup"][-1]["group"] == "file"


def test_theta_poly(capsys):
    code, rep = run_json(capsys, "theta-check", "--poly", "6,1,0,0,0,0,1")
    assert code == 0
    assert rep["discriminant"] == -362793931
    assert rep["certification"] == "CERTIFIED_FULL"
    assert not rep["c_T_trivial"]
    assert all(r["trivial"] for r in rep["cyclic_table"])
    assert rep["sha_style"]


def test_theta_klein(capsys):
    code, rep = run_json(capsys, "theta-check", "--generators", "(1 2)(5 6), (3 4)(5 6)", "--genus", "2")
    assert code == 0 and not rep["c_T_trivial"] and rep["fixed_points"] == []


def test_theta_transposition(capsys):
    code, rep = run_json(capsys, "theta-check", "--generators", "(1 2)", "--genus", "2")
    assert code == 0 and rep["c_T_trivial"]
    assert [3] in rep["fixed_points"]


def test_theta_text_output(capsys):
    code, out, _ = run(capsys, "theta-check", "--generators", "(1 2)(5 6), (3 4)(5 6)")
    assert code == 0 and "NONTRIVIAL" in out


def test_theta_undetermined(capsys):
    code, out, _ = run(capsys, "theta-check", "--poly", "1,0,0,0,0,0,1")
    assert code == 2 and "group undetermined" in out


def test_theta_needs_one_source(capsys):
    with pytest.raises(SystemExit) as e:
        main(["theta-check"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(["theta-check", "--poly", "1,2", "--generators", "(1 2)"])


def test_theta_bad_point(capsys):
    code, _, err = run(capsys, "theta-check", "--generators", "(1 9)")
    assert code == 2 and err


def test_frobenius_scan(capsys):
    code, out, _ = run(capsys, "frobenius-scan", "--poly", "6,1,0,0,0,0,1")
    assert code == 0 and "-362793931" in out
    code, rep = run_json(capsys, "frobenius-scan", "--poly", "1,0,1", "--prime-bound", "30")
    assert rep["ramified"] == [2]
    code, rep = run_json(capsys, "frobenius-scan", "--poly", "1,0,1", "--prime-bound", "1")
    assert code == 0 and rep["table"] == []


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SELFCUP_THREADS", "3")
    code, rep = run_json(capsys, "frobenius-scan", "--poly", "6,1,0,0,0,0,1", "--prime-bound", "300")
    monkeypatch.setenv("SELFCUP_THREADS", "1")
    code2, rep2 = run_json(capsys, "frobenius-scan", "--poly", "6,1,0,0,0,0,1", "--prime-bound", "300")
    assert rep == rep2
