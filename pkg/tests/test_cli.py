import io
import json

import pytest

from app import StromApp
from constants.exit_codes import EXIT_CONFIG_ERROR, EXIT_FAIL, EXIT_PASS, EXIT_RUNTIME_ERROR
from constants.file import (
    EGGTIMER_MODEL_FILE,
    EGGTIMER_MUT_TICK_MODEL_FILE,
    EGGTIMER_SPEC_FILE,
    TODOMVC_LITE_BUG7_MODEL_FILE,
    TODOMVC_LITE_SPEC_FILE,
)
from tests.conftest import model_path, spec_path
from utils.cli_app import ConfigError, parse_subscripts, run_cli

EGGTIMER = spec_path(EGGTIMER_SPEC_FILE)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)

    return code, out.getvalue(), err.getvalue()


def executor(model_file):
    return f"model:{model_path(model_file)}"


class TestCheck:
    def test_correct_timer(self):
        code, out, err = cli("check", EGGTIMER, "--executor", executor(EGGTIMER_MODEL_FILE), "--seed", "42", "--runs", "5")

        assert code == EXIT_PASS
        assert "seed: 42\n" in err
        assert "Property safety: PASS" in out
        assert "Property liveness: PASS" in out
        assert "Property timeUp: PASS" in out

    def test_mutant(self):
        code, out, _ = cli("check", EGGTIMER, "--executor", executor(EGGTIMER_MUT_TICK_MODEL_FILE), "--seed", "42")

        assert code == EXIT_FAIL
        assert "Property safety: FAIL" in out
        assert "First violated state:" in out

    def test_fail_fast_stops_at_the_first_failing_property(self):
        _, out, _ = cli(
            "check", EGGTIMER, "--executor", executor(EGGTIMER_MUT_TICK_MODEL_FILE), "--seed", "42", "--fail-fast"
        )

        assert "Property safety: FAIL" in out
        assert "Property liveness" not in out

    def test_machine_report_to_file(self, tmp_path):
        output = tmp_path / "report.json"

        code, out, _ = cli(
            "check",
            EGGTIMER,
            "--executor",
            executor(EGGTIMER_MUT_TICK_MODEL_FILE),
            "--seed",
            "42",
            "--runs",
            "20",
            "--format",
            "machine",
            "--output",
            str(output),
        )

        assert code == EXIT_FAIL
        assert out == ""
        document = json.loads(output.read_text(encoding="utf-8"))
        assert document["overall"] == "fail"
        assert [check["property"] for check in document["checks"]] == ["safety", "liveness", "timeUp"]

    def test_same_seed_same_report(self):
        argv = ("check", EGGTIMER, "--executor", executor(EGGTIMER_MUT_TICK_MODEL_FILE), "--seed", "9", "--runs", "3")

        assert cli(*argv)[1] == cli(*argv)[1]

    def test_missing_model(self, tmp_path):
        code, _, err = cli("check", EGGTIMER, "--executor", f"model:{tmp_path / 'missing.json'}")

        assert code == EXIT_CONFIG_ERROR
        assert err.startswith("error: ")

    @pytest.mark.parametrize(
        "extra",
        [
            ["--runs", "0"],
            ["--max-actions", "-1"],
            ["--seed", "-3"],
            ["--format", "xml"],
            ["--jobs", "zero"],
            ["--executor", "ws://localhost"],
        ],
    )
    def test_bad_arguments(self, extra):
        code, _, _ = cli("check", EGGTIMER, "--executor", executor(EGGTIMER_MODEL_FILE), *extra)

        assert code == EXIT_CONFIG_ERROR

    def test_missing_executor(self):
        assert cli("check", EGGTIMER)[0] == EXIT_CONFIG_ERROR

    def test_syntax_error(self, tmp_path):
        spec = tmp_path / "broken.strom"
        spec.write_text("let x = ;\n", encoding="utf-8")

        code, _, err = cli("check", str(spec), "--executor", executor(EGGTIMER_MODEL_FILE))

        assert code == EXIT_CONFIG_ERROR
        assert "error:" in err

    def test_runtime_error_has_its_own_exit_code(self, tmp_path):
        spec = tmp_path / "text_atom.strom"
        spec.write_text(
            "action start! = click!(`#toggle`);\nlet ~p = always_2 (`#toggle`.text);\ncheck p;\n",
            encoding="utf-8",
        )

        code, out, err = cli("check", str(spec), "--executor", executor(EGGTIMER_MODEL_FILE), "--seed", "1")

        assert code == EXIT_RUNTIME_ERROR
        assert out == ""
        assert "error:" in err


class TestDeps:
    def test_safety(self):
        code, out, _ = cli("deps", EGGTIMER, "safety")

        assert code == EXIT_PASS
        assert json.loads(out) == ["#remaining.text", "#toggle.text"]

    def test_first_check_by_default(self):
        assert json.loads(cli("deps", EGGTIMER)[1]) == ["#remaining.text", "#toggle.text"]

    def test_unknown_property(self):
        assert cli("deps", EGGTIMER, "nope")[0] == EXIT_CONFIG_ERROR


class TestParse:
    def test_empty_file(self, tmp_path):
        spec = tmp_path / "empty.strom"
        spec.write_text("", encoding="utf-8")

        code, out, _ = cli("parse", str(spec))

        assert code == EXIT_PASS
        assert json.loads(out) == []

    def test_print(self):
        code, out, _ = cli("parse", EGGTIMER, "--print")

        assert code == EXIT_PASS
        assert "check safety liveness;" in out


class TestSweep:
    def test_csv(self):
        code, out, _ = cli(
            "sweep",
            spec_path(TODOMVC_LITE_SPEC_FILE),
            "--executor",
            executor(TODOMVC_LITE_BUG7_MODEL_FILE),
            "--subscripts",
            "1,3",
            "--runs",
            "2",
            "--seed",
            "1",
        )

        assert code == EXIT_PASS
        lines = out.splitlines()
        assert lines[0] == "subscript,detection_rate,mean_actions"
        assert [line.split(",")[0] for line in lines[1:]] == ["1", "3"]

    @pytest.mark.parametrize("text", ["", "a,b", "1,-2"])
    def test_bad_subscripts(self, text):
        with pytest.raises(ConfigError):
            parse_subscripts(text)

    def test_subscripts(self):
        assert parse_subscripts("1, 10,50") == [1, 10, 50]


def test_app_entry_point():
    assert StromApp(["deps", EGGTIMER, "safety"]).run() == EXIT_PASS
