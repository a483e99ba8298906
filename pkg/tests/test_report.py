import json

import pytest

from checker.session import FAIL, INCONCLUSIVE, NOTE_HARD_CAP, OUTCOME_INCONCLUSIVE, PASS, CheckResult, RunResult
from checker.state import ActionPerformed, EventOccurred, InitialEvent, TimedOut, TraceEntry
from constants.defaults import FORMAT_HUMAN, FORMAT_MACHINE
from constants.exit_codes import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS
from ltl.verdict import Verdict
from protocol.messages import Descriptor
from speclang.values import State
from tests.conftest import golden_path
from utils.formatting import to_percent, to_value_text
from utils.io import read_text
from utils.metrics import get_detection_rate, get_mean_actions, get_runs_df, get_verdict_counts
from views.check_report import (
    exit_code,
    load_machine_report,
    machine_document,
    overall_outcome,
    parse_machine_document,
    report,
    show_human,
)

CLICK = Descriptor("click", ("#toggle",))
TICK = Descriptor("changed", ("#remaining.text",))

LOADED = InitialEvent("loaded?", Descriptor("loaded"))


def entry(toggle, happened, cause, remaining="5"):
    return TraceEntry(State({"#remaining.text": remaining, "#toggle.text": toggle}, happened), cause)


FAILING_TRACE = [
    entry("start", ("loaded?",), LOADED),
    entry("stop", ("start!",), ActionPerformed("start!", CLICK)),
    entry("stop", ("tick?",), EventOccurred(("tick?",), TICK)),
]


def passing_run(index, actions=3):
    trace = [TraceEntry(State({"#toggle.text": "start"}, ("loaded?",)), LOADED)]
    return RunResult(index, 100 + index, Verdict.PRESUMABLY_TRUE, trace, actions)


FAILED = RunResult(1, 101, Verdict.DEFINITELY_FALSE, FAILING_TRACE, 1, definitive_at=2)
TIMED_OUT = RunResult(
    2,
    102,
    INCONCLUSIVE,
    [FAILING_TRACE[0], TraceEntry(State({"#toggle.text": "start"}), TimedOut("wait!"))],
    5,
    note=NOTE_HARD_CAP,
    residual="eventually_3 (...)",
)


@pytest.fixture
def failing():
    return CheckResult("safety", 42, ("#remaining.text", "#toggle.text"), [passing_run(0), FAILED])


@pytest.fixture
def passing():
    return CheckResult("liveness", 42, ("#toggle.text",), [passing_run(0), passing_run(1, actions=5)])


@pytest.fixture
def inconclusive():
    return CheckResult("timeUp", 42, ("#toggle.text",), [passing_run(0), TIMED_OUT])


class TestHuman:
    def test_failing_property(self, failing):
        text = show_human([failing])

        assert text.startswith("Property safety: FAIL (2 run(s): 1 DefinitelyFalse, 1 PresumablyTrue)\n")
        assert "  seed 42, dependencies #remaining.text, #toggle.text\n" in text
        assert f"  detected in {to_percent(0.5)} of runs\n" in text
        assert "  Run 0 (seed 100): PresumablyTrue after 3 action(s)\n" in text
        assert "  Run 1 (seed 101): DefinitelyFalse after 1 action(s)\n" in text
        assert "    [0] loaded?\n" in text
        assert "    [1] start! [click(#toggle)]\n" in text
        assert "    [2] tick? [changed(#remaining.text)]  <- violated\n" in text
        assert "    First violated state: 2\n" in text

    def test_only_changed_fields_after_the_first_state(self, failing):
        text = show_human([failing])

        assert f"      #remaining.text = {to_value_text('5')}\n" in text
        assert f"      #toggle.text: {to_value_text('start')} -> {to_value_text('stop')}\n" in text
        assert text.count("#remaining.text = ") == 1

    def test_passing_runs_have_no_trace(self, passing):
        text = show_human([passing])

        assert text.startswith("Property liveness: PASS (2 run(s): 2 PresumablyTrue)\n")
        assert "[0]" not in text
        assert "detected" not in text

    def test_notes(self, inconclusive):
        text = show_human([inconclusive])

        assert f"  Run 2 (seed 102): Inconclusive after 5 action(s) [{NOTE_HARD_CAP}]\n" in text
        assert "Property timeUp: INCONCLUSIVE" in text
        assert "    Still required: eventually_3 (...)\n" in text


class TestMachine:
    def test_document(self, failing):
        document = machine_document([failing])

        assert document["version"] == 1
        assert document["overall"] == FAIL
        (check,) = document["checks"]
        assert check["property"] == "safety"
        assert check["verdict"] == FAIL
        run = check["runs"][1]
        assert run["verdict"] == "DefinitelyFalse"
        assert run["definitive_at"] == 2
        assert run["residual"] is None
        assert run["trace"][1] == {
            "cause": {"kind": "action", "name": "start!", "descriptor": {"id": "click", "args": ["#toggle"]}},
            "happened": ["start!"],
            "state": {"#remaining.text": "5", "#toggle.text": "stop"},
        }

    def test_matches_the_golden_report(self, failing, inconclusive):
        assert report([failing, inconclusive], FORMAT_MACHINE) == read_text(golden_path("machine_report.json"))

    def test_parse_restores_the_results(self, failing, inconclusive):
        text = report([failing, inconclusive], FORMAT_MACHINE)

        assert parse_machine_document(json.loads(text)) == [failing, inconclusive]

    def test_load_from_file(self, tmp_path, failing):
        path = tmp_path / "report.json"
        path.write_text(report([failing], FORMAT_MACHINE), encoding="utf-8")

        (loaded,) = load_machine_report(str(path))

        assert loaded.runs[1].trace[2].cause == EventOccurred(("tick?",), TICK)
        assert loaded.overall == FAIL

    def test_unknown_version(self, failing):
        document = machine_document([failing])
        document["version"] = 99

        with pytest.raises(ValueError):
            parse_machine_document(document)

    def test_unknown_verdict(self, failing):
        document = machine_document([failing])
        document["checks"][0]["runs"][0]["verdict"] = "Maybe"

        with pytest.raises(ValueError):
            parse_machine_document(document)


class TestOutcome:
    def test_precedence(self, failing, passing, inconclusive):
        assert overall_outcome([passing]) == PASS
        assert overall_outcome([passing, inconclusive]) == OUTCOME_INCONCLUSIVE
        assert overall_outcome([inconclusive, failing, passing]) == FAIL

    def test_exit_codes(self, failing, passing, inconclusive):
        assert exit_code([passing]) == EXIT_PASS
        assert exit_code([passing, inconclusive]) == EXIT_INCONCLUSIVE
        assert exit_code([failing, inconclusive]) == EXIT_FAIL

    def test_human_is_the_default_format(self, passing):
        assert report([passing]) == report([passing], FORMAT_HUMAN) == show_human([passing])


class TestMetrics:
    def test_runs_df(self, failing):
        runs_df = get_runs_df(failing.runs)

        assert list(runs_df["failed"]) == [False, True]
        assert list(runs_df["trace_length"]) == [1, 3]

    def test_rates(self, failing, passing):
        assert get_detection_rate(failing) == 0.5
        assert get_detection_rate(passing) == 0.0
        assert get_mean_actions(passing) == 4.0

    def test_empty(self):
        empty = CheckResult("p", 1, ())

        assert get_detection_rate(empty) == 0.0
        assert get_mean_actions(empty) == 0.0

    def test_verdict_counts(self, inconclusive):
        assert get_verdict_counts(inconclusive).to_dict() == {INCONCLUSIVE: 1, "PresumablyTrue": 1}
