import json
import math
from fractions import Fraction

import pytest

from nonlocal_kit import ConfigurationError, Params
from nonlocal_kit.verify import SUITES, CaseResult, SuiteReport, run_suite
from nonlocal_kit.verify.cli import main
from nonlocal_kit.verify.report import format_number
from nonlocal_kit.verify.suites import _Case, _report, default_params

P = Params(5, 1, 1, 0, 4)


# -- report model ------------------------------------------------------------------

def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(math.pi)) == math.pi
    assert format_number(-0.0) == "0"
    assert format_number(3) == "3"
    assert format_number(True) == "true"
    assert format_number(math.nan) == '"nan"'
    assert format_number(-math.inf) == '"-inf"'


@pytest.mark.parametrize("policy,computed,expected,tol,ok", [
    ("abs", 1.0005, 1.0, 1e-3, True),
    ("abs", 1.002, 1.0, 1e-3, False),
    ("rel", 1001.0, 1000.0, 1e-3, True),
    ("rel", 1e-9, 0.0, 1.0, False),
    ("either", 1e-9, 0.0, 1e-6, True),
    ("le", 1.0 + 5e-7, 1.0, 1e-6, True),
    ("le", 1.1, 1.0, 1e-6, False),
    ("lt", 0.9, 1.0, 0.0, True),
    ("lt", 1.0, 1.0, 0.0, False),
    ("gt", 1e-300, 0.0, 0.0, True),
    ("gt", 0.0, 0.0, 0.0, False),
])
def test_policies(policy, computed, expected, tol, ok):
    case = CaseResult.judge("c", "d", computed, expected, tol, policy)
    assert case.passed is ok
    assert "[pass if" in case.description


def test_unknown_policy_and_duplicate_ids():
    with pytest.raises(ValueError):
        CaseResult.judge("c", "d", 1, 1, 0, "close")
    a = CaseResult.judge("x", "d", 1, 1, 0, "abs")
    with pytest.raises(ValueError):
        SuiteReport("s", P, 0, [a, a])


def test_report_json_layout():
    cases = [CaseResult.judge("b", "second", 1.0, 2.0, 0.1, "abs"),
             CaseResult.judge("a", "first", 0.1, 0.1, 0.1, "abs"),
             CaseResult.failure("c", "third", ArithmeticError("boom"), 1.0, 0.5)]
    report = SuiteReport("demo", Params(5, 1, Fraction(1), 0, Fraction(1, 2)), 3, cases)
    text = report.to_json()
    data = json.loads(text)
    assert list(data) == ["suite", "params", "seed", "pass", "wall_time_ms", "cases"]
    assert list(data["params"]) == ["n", "m", "alpha", "a", "p"]
    assert data["params"]["p"] == 0.5 and data["seed"] == 3 and data["pass"] is False
    assert [c["id"] for c in data["cases"]] == ["a", "b", "c"]
    assert list(data["cases"][0]) == ["id", "description", "computed", "expected", "abs_err",
                                      "rel_err", "tol", "pass"]
    assert data["cases"][0]["computed"] == 0.1 and '"computed": 0.10000000000000001' in text
    assert data["cases"][2]["computed"] == "nan"
    assert "ArithmeticError: boom" in data["cases"][2]["description"]
    assert report.exit_code == 1


def test_report_csv_layout(tmp_path):
    report = SuiteReport("demo", P, 0, [CaseResult.judge("z", "d", math.inf, 1.0, 1.0, "abs")])
    lines = report.to_csv().splitlines()
    assert lines[0] == "suite,case_id,computed,expected,abs_err,rel_err,tol,pass"
    assert lines[1] == "demo,z,inf,1,inf,inf,1,false"
    out = report.write(tmp_path / "r.csv", "csv")
    assert out.read_text() == report.to_csv()
    with pytest.raises(ValueError):
        report.render("xml")


def test_empty_report_does_not_pass():
    assert not SuiteReport("s", P).passed


def test_failing_computation_becomes_failed_case():
    def boom():
        raise ZeroDivisionError("x")

    cases = [_Case("ok", "fine", lambda: (1.0, 1.0), 1e-9, "abs"),
             _Case("bad", "broken", boom, 1e-9, "abs", 2.0),
             _Case("err", "expects an error", boom, 0.0, raises=ZeroDivisionError),
             _Case("noerr", "expects an error", lambda: (1, 1), 0.0, raises=ZeroDivisionError)]
    report = _report("demo", P, cases)
    assert [c.id for c in report.cases] == ["bad", "err", "noerr", "ok"]
    assert [c.passed for c in report.cases] == [False, True, False, True]
    assert report.case("bad").expected == 2.0 and math.isnan(report.case("bad").computed)


# -- suites ------------------------------------------------------------------------

def test_default_params():
    assert default_params("bubble-ie") == Params(5, 1, 1, 0, 4)
    assert default_params("mu") == Params(5, 1, 1, 0, Fraction(1, 2))
    assert default_params("kelvin", n=6, m=2).p == critical_exponent_of(6, 2, 1, 0)
    assert default_params("mu", p=Fraction(3, 4), a=1).a == 1


def critical_exponent_of(n, m, alpha, a):
    return Fraction(n + 2 * m + alpha + 2 * a, n - 2 * m - alpha)


def test_mu_suite_limit():
    report = run_suite("mu")
    assert report.passed
    assert report.case("limit").computed == -6.0
    ids = [c.id for c in report.cases]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)


@pytest.mark.parametrize("name", ["constants", "riesz-semigroup", "bubble-ie", "superpoly",
                                  "kelvin", "mu"])
def test_fast_suites_pass(name):
    report = run_suite(name)
    assert report.passed, [c.id for c in report.cases if not c.passed]
    assert all(c.tol >= 0 for c in report.cases)


def test_kelvin_suite_cases():
    report = run_suite("kelvin")
    assert {"involution", "q-invariance", "fixed-sphere"} <= {c.id for c in report.cases}


def test_unknown_suite_and_format():
    with pytest.raises(ConfigurationError):
        run_suite("nope")
    with pytest.raises(ConfigurationError):
        run_suite("mu", fmt="xml")


def test_tol_override_is_recorded():
    report = run_suite("riesz-semigroup", tol=1e-20)
    assert not report.passed
    assert report.case("dist-1").tol == 1e-20


def test_threads_give_identical_bytes(tmp_path, monkeypatch):
    for name in ("constants", "riesz-semigroup", "kelvin", "superpoly"):
        monkeypatch.delenv("NLK_THREADS", raising=False)
        serial = run_suite(name, out_path=tmp_path / "a.json").to_json()
        monkeypatch.setenv("NLK_THREADS", "4")
        threaded = run_suite(name, out_path=tmp_path / "b.json").to_json()
        assert serial == threaded
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_timing_flag_only_source_of_clock():
    assert run_suite("mu").wall_time_ms == 0
    assert run_suite("bubble-ie", timing=True).wall_time_ms >= 0


def test_seed_changes_kelvin_samples():
    a = run_suite("kelvin", seed=1)
    b = run_suite("kelvin", seed=2)
    assert a.seed == 1 and a.passed and b.passed
    assert a.to_json() != b.to_json()


# -- CLI ---------------------------------------------------------------------------

def test_cli_verify_json(capsys):
    assert main(["verify", "riesz-semigroup"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["suite"] == "riesz-semigroup" and data["pass"] is True


def test_cli_failure_exit_code(capsys):
    assert main(["verify", "riesz-semigroup", "--tol", "1e-20"]) == 1
    assert json.loads(capsys.readouterr().out)["pass"] is False


@pytest.mark.parametrize("argv", [
    ["verify", "unknown"],
    ["frobnicate"],
    [],
    ["verify", "mu", "--format", "xml"],
    ["verify", "mu", "--alpha", "abc"],
    ["verify", "mu", "--seed", "-1"],
    ["verify", "bubble-ie", "--p", "3"],
    ["verify", "mu", "--p", "4"],
    ["verify", "mean-value", "--n", "4"],
    ["verify", "mu", "--alpha", "2"],
    ["mu", "--p", "5"],
])
def test_cli_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "nlk:" in capsys.readouterr().err


def test_cli_unwritable_out(tmp_path, capsys):
    assert main(["verify", "mu", "--out", str(tmp_path / "missing" / "r.json")]) == 2
    assert "I/O error" in capsys.readouterr().err


def test_cli_out_and_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify", "kelvin", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith("suite,case_id,computed,expected,abs_err,rel_err,tol,pass\n")


def test_cli_mu(capsys):
    assert main(["mu", "--p", "1/2", "--samples", "4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sequence_exact"] == ["1", "-5/2", "-17/4", "-41/8", "-89/16"]
    assert data["limit"] == -6.0 and data["limit_exact"] == "-6"
    assert data["regime"] == "Subcritical"
    assert main(["mu", "--p", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["limit"] == "-inf" and data["limit_exact"] is None


def test_cli_constants(capsys):
    assert main(["constants"]) == 0
    data = json.loads(capsys.readouterr().out)["constants"]
    assert data["critical_exponent"] == 4.0
    assert data["bubble_prefactor"] == pytest.approx(48 ** (1 / 3), rel=1e-14)
    assert main(["constants", "--n", "3", "--m", "1"]) == 0
    data = json.loads(capsys.readouterr().out)["constants"]
    assert data["critical_exponent"] is None


def test_cli_deterministic(capsys):
    main(["verify", "constants"])
    first = capsys.readouterr().out
    main(["verify", "constants"])
    assert capsys.readouterr().out == first


def test_suite_names():
    assert SUITES == ("constants", "mean-value", "green-poisson", "riesz-semigroup",
                      "bubble-ie", "superpoly", "kelvin", "mu")
