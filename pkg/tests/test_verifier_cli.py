import json

import pytest

from nct.cli import main
from nct.errors import InputError
from nct.kernel import FiniteStrictNCat, cell, is_gaunt, is_iso, validate
from nct.verifier import (FAULTS, SUITES, SuiteConfig, VerificationReport, corpus_generate,
                          report_render, run_suite)

CHEAP = ["kernel-laws", "pushout-calculus", "fiber-decomposition", "s00-iso",
         "grids-retracts", "autos"]


# -- corpus ------------------------------------------------------------------

def test_corpus_is_valid_and_deterministic():
    a, b = corpus_generate(2, seed=3), corpus_generate(2, seed=3)
    assert a.names() == b.names()
    assert all(X == Y for X, Y in zip(a.objects(), b.objects()))
    assert all(validate(X).valid for X in a.objects())


def test_corpus_has_no_duplicates_up_to_iso():
    objs = corpus_generate(2).objects()
    for i, X in enumerate(objs):
        for Y in objs[i + 1:]:
            assert not is_iso(X, Y)


def test_corpus_gaunt_members():
    c = corpus_generate(2)
    names = [nm for nm, _ in c.gaunt()]
    assert "E" not in names and "C2" in names
    assert all(is_gaunt(X).gaunt for _, X in c.gaunt())


# -- config ------------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"suite": "nope"}, {"suite": "autos", "n": 0},
                                {"suite": "autos", "fault": "unglued"},
                                {"suite": "autos", "window": 0},
                                {"suite": "autos", "budget": 0}])
def test_bad_config(kw):
    with pytest.raises(InputError):
        SuiteConfig(**kw)


def test_every_suite_has_a_fault():
    assert set(FAULTS) == set(SUITES)


# -- reports -----------------------------------------------------------------

@pytest.mark.parametrize("suite", CHEAP)
def test_reports_are_deterministic(suite):
    a = report_render(run_suite(SuiteConfig(suite)))
    b = report_render(run_suite(SuiteConfig(suite)))
    assert a == b


def test_report_round_trips_through_json():
    rep = run_suite(SuiteConfig("autos"))
    back = VerificationReport.from_dict(json.loads(report_render(rep)))
    assert back == rep


def test_timing_only_on_request():
    assert "timing" not in json.loads(report_render(run_suite(SuiteConfig("autos"))))
    rep = run_suite(SuiteConfig("autos", timing=True))
    assert rep.timing["seconds"] >= 0
    assert "time:" in report_render(rep, "text")


def test_text_report_lists_failures():
    rep = run_suite(SuiteConfig("autos", fault="drop-flip"))
    text = report_render(rep, "text")
    assert "result: FAIL" in text and "  FAIL " in text


@pytest.mark.parametrize("suite", CHEAP + ["delta-restriction"])
def test_fault_flips_suite(suite):
    window = 1 if suite == "delta-restriction" else None
    assert run_suite(SuiteConfig(suite, window=window)).passed
    rep = run_suite(SuiteConfig(suite, window=window, fault=FAULTS[suite]))
    assert not rep.passed and rep.failures
    json.dumps(rep.failures)


def test_kernel_fault_names_the_cells():
    rep = run_suite(SuiteConfig("kernel-laws", fault="break-comp"))
    assert any(f["witness"] and f["witness"].get("witness") for f in rep.failures)


# -- CLI ---------------------------------------------------------------------

def test_build_then_check(tmp_path, capsys):
    out = tmp_path / "c2.json"
    assert main(["build", "cell", "--n", "2", "--k", "2", "-o", str(out)]) == 0
    X = FiniteStrictNCat.from_json_dict(json.loads(out.read_text()))
    assert is_iso(X, cell(2, 2))
    assert main(["check", "gaunt", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["gaunt"] is True


def test_check_walking_iso_fails(tmp_path, capsys):
    out = tmp_path / "e.json"
    main(["build", "E", "--n", "1", "-o", str(out)])
    assert main(["check", "gaunt", str(out)]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["gaunt"] is False and rep["level"] == 1


def test_check_invalid_table(tmp_path, capsys):
    d = cell(1, 1).to_json_dict()
    # drop the unit law "id_target after arrow"
    d["structures"][0]["comp"] = [c for c in d["structures"][0]["comp"] if c[:2] != ["⊥", "*"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    assert main(["check", "valid", str(path)]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["valid"] is False and rep["violations"]


def test_build_theta_and_products(capsys):
    assert main(["build", "theta", "--n", "2", "--shape", "[2; [1], [0]]"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert len(FiniteStrictNCat.from_json_dict(d).cells) == 10
    assert main(["build", "cell-product", "--n", "1", "--k", "1", "--j", "1"]) == 0
    assert len(FiniteStrictNCat.from_json_dict(json.loads(capsys.readouterr().out)).cells) == 9


def test_enum(capsys):
    assert main(["enum", "theta", "--n", "1", "--max-size", "3"]) == 0
    assert capsys.readouterr().out.split("\n")[:3] == ["[0]", "[1]", "[2]"]


def test_eval(tmp_path, capsys):
    from nct.presheaf import Indexing, nerve
    path = tmp_path / "p.json"
    path.write_text(json.dumps(nerve(cell(1, 1), Indexing("theta", 1)).to_json_dict()))
    assert main(["eval", str(path), "--at", "[2]"]) == 0
    assert capsys.readouterr().out.strip() == "4"


def test_verify_writes_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["verify", "autos", "--n", "2", "--report", str(path)]) == 0
    assert json.loads(path.read_text())["passed"] is True
    assert main(["verify", "autos", "--fault", "drop-flip"]) == 1


@pytest.mark.parametrize("argv", [["check", "valid", "/no/such/file"],
                                  ["build", "theta", "--n", "2"],
                                  ["build", "theta", "--n", "2", "--shape", "[2; [1]]"],
                                  ["verify", "autos", "--fault", "unglued"]])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "input error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


def test_budget_exhaustion_exits_3(capsys):
    assert main(["verify", "pushout-calculus", "--budget", "1"]) == 3
    assert "resource" in capsys.readouterr().err
