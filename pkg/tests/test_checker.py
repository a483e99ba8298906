import pytest

from checker.replay import replay_run
from checker.session import (
    FAIL,
    INCONCLUSIVE,
    NOTE_HARD_CAP,
    NOTE_STUCK,
    OUTCOME_INCONCLUSIVE,
    PASS,
    Budget,
    derive_seeds,
    run_check,
    run_once,
)
from checker.state import ActionPerformed, EventOccurred, InitialEvent, TimedOut, synthesize_happened
from constants.defaults import FORMULA_NODE_CAP
from constants.file import (
    EGGTIMER_MODEL_FILE,
    EGGTIMER_MUT_STOP_MODEL_FILE,
    EGGTIMER_MUT_TICK_MODEL_FILE,
    EGGTIMER_SPEC_FILE,
    TODOMVC_LITE_BUG7_MODEL_FILE,
    TODOMVC_LITE_BUG8_MODEL_FILE,
    TODOMVC_LITE_MODEL_FILE,
    TODOMVC_LITE_SPEC_FILE,
)
from executor.endpoint import model_connector
from executor.model import load_model, parse_model
from executor.session import ModelSession
from ltl.formula import node_count
from ltl.progression import Definitive, progress, step_forward
from ltl.verdict import Verdict
from protocol.messages import Act, Descriptor
from protocol.transport import InProcessConnection
from speclang.elaborate import elaborate
from speclang.loader import load_spec
from speclang.parser import parse
from speclang.typecheck import typecheck
from tests.conftest import BUTTON_MODEL, model_path, spec_path

BUTTON_SPEC = """
action click! = click!(`#button`);
action ping? = changed?(`#pings`);
let ~counting = always_5 (`#count`.value >= 0);
check counting;
"""

NEVER_NEGATIVE_SPEC = """
action click! = click!(`#button`) when `#count`.value < 0;
let ~negative = eventually_1000 (`#count`.value < 0);
check negative;
"""

# Every ping asks for a short wait, so each click is followed by an event and a timeout.
PINGING_SPEC = """
action click! = click!(`#button`) timeout 1500;
action ping? = changed?(`#pings`) timeout 700;
let ~negative = eventually_1000 (`#count`.value < 0);
check negative;
"""

PASSING = {Verdict.PRESUMABLY_TRUE, Verdict.DEFINITELY_TRUE}


def spec_from(source: str):
    program = parse(source)
    typecheck(program)

    return elaborate(program)


def check_bundle(spec_file, model_file, prop, runs, seed=42, default_subscript=None, max_actions=100):
    _, spec = load_spec(spec_path(spec_file), default_subscript)
    check = next(c for c in spec.checks if prop in c.properties)
    connect = model_connector(load_model(model_path(model_file)))

    return run_check(spec, check, prop, connect, seed, Budget.scaled(runs, max_actions))


class RacingConnection(InProcessConnection):
    """Delivers an event just before the executor sees the first Act."""

    def __init__(self, peer: ModelSession, event_id: str):
        super().__init__(peer)
        self.event_id = event_id
        self.raced = False

    def send(self, msg):
        if isinstance(msg, Act) and not self.raced:
            self.raced = True
            self.deliver(self.peer.inject(self.event_id))
        super().send(msg)


class TestStaleRace:
    def test_event_before_the_act_is_recorded_once(self):
        spec = spec_from(BUTTON_SPEC)
        session = ModelSession(parse_model(BUTTON_MODEL))
        connection = RacingConnection(session, "ping")

        run = run_once(spec, spec.checks[0], "counting", connection, 1, Budget.scaled(1, 5))

        assert connection.raced
        assert run.verdict in PASSING
        assert isinstance(run.trace[0].cause, InitialEvent)
        assert isinstance(run.trace[1].cause, EventOccurred)
        assert run.trace[1].cause.names == ("ping?",)
        assert run.trace[1].state.happened == ("ping?",)
        assert all(isinstance(entry.cause, ActionPerformed) for entry in run.trace[2:])
        # the stale Act was never applied
        assert session.transitions == run.actions_taken + 1
        assert session.fields["#count.value"] == run.actions_taken

    def test_counts_follow_the_trace(self):
        spec = spec_from(BUTTON_SPEC)
        session = ModelSession(parse_model(BUTTON_MODEL))

        run = run_once(spec, spec.checks[0], "counting", RacingConnection(session, "ping"), 1, Budget.scaled(1, 5))

        counts = [entry.state.fields["#count.value"] for entry in run.trace]
        assert counts == [0, 0] + list(range(1, run.actions_taken + 1))


class TestEggTimer:
    @pytest.mark.parametrize("prop", ["safety", "liveness"])
    def test_correct_timer_passes(self, prop):
        result = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, prop, runs=20)

        assert result.overall == PASS
        assert len(result.runs) == 20
        assert {run.verdict for run in result.runs} <= PASSING

    def test_time_up_passes(self):
        result = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, "timeUp", runs=20)

        assert result.overall == PASS

    @pytest.mark.parametrize("model_file", [EGGTIMER_MUT_STOP_MODEL_FILE, EGGTIMER_MUT_TICK_MODEL_FILE])
    def test_mutants_are_caught(self, model_file):
        result = check_bundle(EGGTIMER_SPEC_FILE, model_file, "safety", runs=20)

        assert result.overall == FAIL
        failed = [run for run in result.runs if run.failed]
        assert failed
        for run in failed:
            assert run.verdict is Verdict.DEFINITELY_FALSE
            assert run.definitive_at == len(run.trace) - 1

    def test_dependencies(self):
        result = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, "safety", runs=1)

        assert result.dependencies == ("#remaining.text", "#toggle.text")


class TestTodoMvc:
    def test_filter_bug_is_found(self):
        result = check_bundle(
            TODOMVC_LITE_SPEC_FILE, TODOMVC_LITE_BUG7_MODEL_FILE, "safety", runs=10, default_subscript=50
        )

        assert result.overall == FAIL

    def test_clear_all_keeping_pending_text_is_found(self):
        result = check_bundle(
            TODOMVC_LITE_SPEC_FILE, TODOMVC_LITE_BUG8_MODEL_FILE, "safety", runs=20, default_subscript=50
        )

        assert result.overall == FAIL
        failing = next(run for run in result.runs if run.failed)
        last = failing.trace[-1]
        assert isinstance(last.cause, ActionPerformed)
        assert last.cause.name == "clearAll!"
        assert last.state.fields["#items.count"] == 1

    def test_correct_app_passes(self):
        result = check_bundle(TODOMVC_LITE_SPEC_FILE, TODOMVC_LITE_MODEL_FILE, "safety", runs=10, default_subscript=50)

        assert result.overall == PASS


class TestReplay:
    @pytest.mark.parametrize("model_file", [EGGTIMER_MODEL_FILE, EGGTIMER_MUT_TICK_MODEL_FILE])
    def test_replay_agrees_with_the_run(self, model_file):
        _, spec = load_spec(spec_path(EGGTIMER_SPEC_FILE))
        result = check_bundle(EGGTIMER_SPEC_FILE, model_file, "safety", runs=5)

        for run in result.runs:
            assert replay_run(spec.properties["safety"], run) == run.verdict

    def test_formula_stays_small_over_long_runs(self):
        _, spec = load_spec(spec_path(EGGTIMER_SPEC_FILE))
        prop = spec.properties["safety"]
        result = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, "safety", runs=1, max_actions=500)
        (run,) = result.runs
        assert run.actions_taken >= 500

        formula, largest = prop, 0
        for entry in run.trace:
            progressed = progress(formula, entry.state, FORMULA_NODE_CAP)
            if isinstance(progressed, Definitive):
                break
            largest = max(largest, node_count(progressed.formula))
            formula = step_forward(progressed.formula)

        assert largest <= 10 * node_count(prop)


class TestDeterminism:
    def test_same_seed_same_runs(self):
        first = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, "liveness", runs=3, seed=7)
        second = check_bundle(EGGTIMER_SPEC_FILE, EGGTIMER_MODEL_FILE, "liveness", runs=3, seed=7)

        assert [run.seed for run in first.runs] == [run.seed for run in second.runs]
        assert [[e.label for e in run.trace] for run in first.runs] == [
            [e.label for e in run.trace] for run in second.runs
        ]
        assert [run.verdict for run in first.runs] == [run.verdict for run in second.runs]

    def test_parallel_runs_match_sequential_runs(self):
        _, spec = load_spec(spec_path(EGGTIMER_SPEC_FILE))
        connect = model_connector(load_model(model_path(EGGTIMER_MODEL_FILE)))
        check = spec.checks[0]

        sequential = run_check(spec, check, "safety", connect, 3, Budget.scaled(4, 20))
        parallel = run_check(spec, check, "safety", connect, 3, Budget.scaled(4, 20), jobs=4)

        assert [r.verdict for r in sequential.runs] == [r.verdict for r in parallel.runs]
        assert [len(r.trace) for r in sequential.runs] == [len(r.trace) for r in parallel.runs]

    def test_derived_seeds(self):
        assert derive_seeds(42, 5) == derive_seeds(42, 5)
        assert derive_seeds(42, 5)[:3] == derive_seeds(42, 3)
        assert len(set(derive_seeds(42, 50))) == 50


class TestRunNotes:
    def test_hard_cap(self):
        spec = spec_from(NEVER_NEGATIVE_SPEC.replace(" when `#count`.value < 0", ""))
        connect = model_connector(parse_model(BUTTON_MODEL))

        result = run_check(spec, spec.checks[0], "negative", connect, 1, Budget(runs=1, max_actions=5, hard_cap=8))

        (run,) = result.runs
        assert run.verdict == INCONCLUSIVE
        assert run.note == NOTE_HARD_CAP
        assert len(run.trace) == 9
        assert result.overall == OUTCOME_INCONCLUSIVE
        assert run.residual.startswith("next (eventually_")

    def test_hard_cap_counts_actions_not_states(self):
        spec = spec_from(PINGING_SPEC)
        connect = model_connector(parse_model(BUTTON_MODEL))

        result = run_check(spec, spec.checks[0], "negative", connect, 1, Budget(runs=1, max_actions=2, hard_cap=4))

        (run,) = result.runs
        assert run.note == NOTE_HARD_CAP
        assert run.actions_taken == 4
        causes = [type(entry.cause) for entry in run.trace]
        assert causes == [InitialEvent] + [ActionPerformed, EventOccurred, TimedOut] * 3 + [ActionPerformed]
        assert run.trace[3].cause == TimedOut("ping?")

    def test_stuck(self):
        spec = spec_from(NEVER_NEGATIVE_SPEC)
        model = parse_model({"state": {"#count.value": 0}, "actions": {"click(#button)": {}}})

        result = run_check(spec, spec.checks[0], "negative", model_connector(model), 1, Budget.scaled(1, 5), stuck_limit=3)

        (run,) = result.runs
        assert run.verdict == INCONCLUSIVE
        assert run.note == NOTE_STUCK
        assert run.actions_taken == 0
        assert len(run.trace) == 4

    def test_fail_fast_stops_after_the_first_failure(self):
        _, spec = load_spec(spec_path(EGGTIMER_SPEC_FILE))
        connect = model_connector(load_model(model_path(EGGTIMER_MUT_TICK_MODEL_FILE)))

        fast = run_check(spec, spec.checks[0], "safety", connect, 42, Budget.scaled(20, 100), fail_fast=True)

        assert fast.runs[-1].failed
        assert sum(run.failed for run in fast.runs) == 1


class TestHappened:
    def test_from_causes(self):
        click = Descriptor("click", ("#toggle",))

        assert synthesize_happened(InitialEvent("loaded?", Descriptor("loaded"))) == ("loaded?",)
        assert synthesize_happened(ActionPerformed("start!", click)) == ("start!",)
        assert synthesize_happened(EventOccurred(("a?", "b?"), Descriptor("changed", ("#x.y",)))) == ("a?", "b?")
        assert synthesize_happened(TimedOut("wait!")) == ("wait!",)
        assert synthesize_happened(TimedOut()) == ()
