import json

import pytest

from metac import adapters
from metac.cli import main

TINY_ASP_FIRST = "o(a,0).\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compile_formats(capsys, corpus, tmp_path):
    tiny = str(corpus / "tiny.mlp")
    code, out, _ = run(capsys, "compile", tiny, "--backend", "bool", "--lambda", "2", "--nu", "3")
    assert code == 0 and out.startswith(TINY_ASP_FIRST) and "t(1,1); t(1,2); t(1,3) :- t(0,0)." in out
    code, out, _ = run(capsys, "compile", tiny, "--backend", "dc", "--lambda", "2", "--format", "dc")
    assert code == 0 and "&sum{t(0) ; -t(1)} <= -2 :- o(a,0)." in out
    code, out, _ = run(capsys, "compile", tiny, "--backend", "dc", "--lambda", "2", "--head-shift", "off")
    assert ":- o(a,0), not &sum{t(0) ; -t(1)} <= -2." in out
    target = tmp_path / "tiny.json"
    code, out, _ = run(capsys, "compile", tiny, "--backend", "dc", "--lambda", "2", "--format", "json", "-o", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["backend"] == "dc"


def test_compile_dentist_both_pipelines(capsys, corpus):
    dentist = str(corpus / "dentist.mlp")
    code, out, _ = run(capsys, "compile", dentist, "--backend", "dc", "--lambda", "4", "--format", "dc")
    assert code == 0 and out.startswith("o(at(cash,atm),0).") and "&sum{t(0)} = 0." in out
    code, out, _ = run(capsys, "compile", dentist, "--backend", "bool", "--lambda", "4", "--nu", "110", "--format", "asp")
    assert code == 0 and "t(0,0).\n" in out and "&sum" not in out


def test_usage_errors(capsys, corpus):
    tiny = str(corpus / "tiny.mlp")
    code, _, err = run(capsys, "compile", tiny, "--backend", "bool", "--lambda", "2")
    assert code == 2 and "--nu" in err
    assert run(capsys, "compile", tiny, "--backend", "dc", "--lambda", "2", "--format", "asp")[0] == 2
    assert run(capsys, "compile", tiny, "--lambda", "2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "compile", tiny, "--backend", "bool", "--lambda", "3", "--nu", "1")[0] == 2
    assert run(capsys, "verify", tiny, "--lambda", "2")[0] == 2


def test_dc_compile_ignores_nu_with_warning(capsys, corpus):
    code, out, err = run(capsys, "compile", str(corpus / "tiny.mlp"), "--backend", "dc", "--lambda", "2", "--nu", "3")
    assert code == 0 and "ignored" in err and "&sum" in out


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.mlp"
    bad.write_text("a(X).\n")
    code, _, err = run(capsys, "compile", str(bad), "--backend", "dc", "--lambda", "2")
    assert code == 3 and "bad.mlp:1:3: error" in err
    assert run(capsys, "compile", str(tmp_path / "none.mlp"), "--backend", "dc", "--lambda", "2")[0] == 3


def test_solve_tiny(capsys, corpus):
    tiny = str(corpus / "tiny.mlp")
    for extra in (["--backend", "bool", "--nu", "3"], ["--backend", "dc"], ["--backend", "dc", "--nu", "3"]):
        code, out, _ = run(capsys, "solve", tiny, "--lambda", "2", "--all", *extra)
        assert code == 0
        assert "step 0: {a} @ time 0\nstep 1: {b} @ time 2\n" in out
        assert out.rstrip().endswith("Models: 1")


def test_solve_unsat_and_cap(capsys, corpus):
    tiny = str(corpus / "tiny.mlp")
    code, out, _ = run(capsys, "solve", tiny, "--backend", "bool", "--lambda", "1", "--nu", "0", "--all")
    assert code == 1 and "Models: 0" in out
    code, _, err = run(capsys, "solve", str(corpus / "dentist.mlp"), "--backend", "dc", "--lambda", "4")
    assert code == 4 and "--atom-cap" in err


def test_solve_with_deadline(capsys, corpus):
    goal = str(corpus / "reduced_dentist.mlp")
    code, out, _ = run(capsys, "solve", goal, "--backend", "dc", "--lambda", "3", "--all", "--atom-cap", "32")
    assert code == 0 and "Models: 1" in out
    code, out, _ = run(capsys, "solve", goal, "--backend", "dc", "--lambda", "3", "--deadline", "5", "--atom-cap", "32")
    assert code == 1


def test_verify_file_and_random(capsys, corpus):
    code, out, _ = run(capsys, "verify", str(corpus / "tiny.mlp"), "--lambda", "2", "--nu", "3")
    assert code == 0 and "PASS" in out and "3/3 checks passed" in out
    code, out, _ = run(capsys, "verify", "--random", "5", "--seed", "1", "--lambda", "2", "--nu", "2",
                       "--backend", "bool", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc) == 5 and all(r["seed"] == 1 and r["generator"]["atoms"] == 3 for r in doc)


def test_stats(capsys, corpus):
    code, out, _ = run(capsys, "stats", str(corpus / "tiny.mlp"), "--backend", "bool", "--lambda", "2", "--nu", "3",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["rules"] == 13 and doc["parts"] == {"core": 4, "delta": 5, "psi": 4}
    code, out, _ = run(capsys, "stats", str(corpus / "tiny.mlp"), "--backend", "dc", "--lambda", "2")
    assert code == 0 and "constraint atoms" in out


def test_bench(capsys, tmp_path, corpus):
    (tmp_path / "tiny.mlp").write_text((corpus / "tiny.mlp").read_text())
    code, out, _ = run(capsys, "bench", str(tmp_path), "--scales", "1,2,4", "--lambda", "2", "--nu", "3",
                       "--repeats", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 6 and doc["trends"]["tiny"]["dc_rules_constant"]
    assert run(capsys, "bench", str(tmp_path / "nope"))[0] == 3
    assert run(capsys, "bench", str(tmp_path), "--scales", "x")[0] == 2


def test_external_missing_solver(capsys, corpus, monkeypatch, tmp_path):
    monkeypatch.delenv("METAC_ASP_BIN", raising=False)
    monkeypatch.chdir(tmp_path)
    code, _, err = run(capsys, "solve", str(corpus / "tiny.mlp"), "--backend", "bool", "--lambda", "2", "--nu", "3",
                       "--engine", "external")
    assert code == 5 and "METAC_ASP_BIN" in err


@pytest.mark.skipif(not adapters.available("asp"), reason="no ASP solver configured")
def test_solve_external_tiny(capsys, corpus):
    code, out, _ = run(capsys, "solve", str(corpus / "tiny.mlp"), "--backend", "bool", "--lambda", "2", "--nu", "3",
                       "--engine", "external", "--all")
    assert code == 0 and "step 1: {b} @ time 2" in out and "Models: 1" in out
