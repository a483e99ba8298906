import pytest

from constants.file import EGGTIMER_SPEC_FILE
from ltl.formula import Always, And, Atom, Freeze, Not, Or, free_binders
from ltl.progression import evaluate_trace
from ltl.verdict import Verdict
from speclang.elaborate import elaborate
from speclang.errors import ElaborationError
from speclang.expr import BinOp, Builtin, Field, Happened, Lit, Var
from speclang.loader import load_spec
from speclang.parser import parse
from speclang.syntax import EVENT, USER_ACTION
from speclang.typecheck import typecheck
from speclang.values import State
from tests.conftest import spec_path

EVOVAE_LAZY = """
let evovae(~x) { let v = x; always (x == v) }
let ~prop = evovae(`#s`.text);
check prop;
"""

EVOVAE_EAGER = """
let evovae(x) { let v = x; always (x == v) }
let ~prop = evovae(`#s`.text);
check prop;
"""

s_text = Field("#s", "text")


def elaborate_source(source: str, default_subscript: int = 100):
    program = parse(source)
    typecheck(program)

    return elaborate(program, default_subscript)


def elaboration_error(source: str) -> str:
    with pytest.raises(ElaborationError) as e:
        elaborate_source(source)

    return e.value.kind


class TestLazyAndEager:
    def test_lazy_parameter_freezes_inside_the_body(self):
        prop = elaborate_source(EVOVAE_LAZY).properties["prop"]

        assert isinstance(prop, Freeze)
        assert prop.expr == s_text
        assert prop.body == Always(100, Atom(BinOp("==", s_text, Var(prop.binder))))

    def test_eager_parameter_at_top_level_is_rejected(self):
        source = "let evovae(x) { let v = x; always (x == v) }\nlet prop = evovae(`#s`.text);\n"

        assert elaboration_error(source) == ElaborationError.STATE_ACCESS_OUTSIDE_TEMPORAL_CONTEXT

    def test_the_two_readings_differ_when_the_selector_changes(self):
        changing = [State({"#s.text": "a"}), State({"#s.text": "b"})]
        lazy = elaborate_source(EVOVAE_LAZY, 0).properties["prop"]
        eager = elaborate_source(EVOVAE_EAGER, 0).properties["prop"]

        assert evaluate_trace(lazy, changing).verdict == Verdict.DEFINITELY_FALSE
        assert evaluate_trace(eager, changing).verdict == Verdict.PRESUMABLY_TRUE

    def test_lazy_binding_is_substituted(self):
        prop = elaborate_source("let ~on = `#a`.on;\nlet ~p = nextW on;\ncheck p;").properties["p"]

        assert prop.body == Atom(Field("#a", "on"))


class TestFormulas:
    def test_default_subscript(self):
        prop = elaborate_source("let ~p = always `#a`.on;\ncheck p;").properties["p"]

        assert prop == Always(100, Atom(Field("#a", "on")))

    def test_explicit_subscript_wins(self):
        prop = elaborate_source("let ~p = always_7 `#a`.on;\ncheck p;").properties["p"]

        assert prop.n == 7

    def test_temporal_if(self):
        source = "let ~p = if `#a`.on { always_1 `#b`.on } else { `#c`.on };\ncheck p;"
        prop = elaborate_source(source).properties["p"]

        cond = Atom(Field("#a", "on"))
        assert prop == Or(
            And(cond, Always(1, Atom(Field("#b", "on")))),
            And(Not(cond), Atom(Field("#c", "on"))),
        )

    def test_value_if_stays_an_expression(self):
        prop = elaborate_source("let ~p = (if `#a`.on { 1 } else { 2 }) == 1;\ncheck p;").properties["p"]

        assert isinstance(prop, Atom)

    def test_happened_membership(self):
        prop = elaborate_source("let ~p = loaded? in happened;\ncheck p;").properties["p"]

        assert prop == Atom(BinOp("in", Lit("loaded?"), Happened()))

    def test_implication(self):
        prop = elaborate_source("let ~p = `#a`.on ==> always_0 `#b`.on;\ncheck p;").properties["p"]

        assert prop == Or(Not(Atom(Field("#a", "on"))), Always(0, Atom(Field("#b", "on"))))

    def test_static_binding_is_folded_in(self):
        prop = elaborate_source("let limit = 3;\nlet ~p = `#n`.count < limit;\ncheck p;").properties["p"]

        assert prop == Atom(BinOp("<", Field("#n", "count"), Lit(3)))

    def test_builtin(self):
        prop = elaborate_source("let ~p = parseInt(`#n`.text) > 0;\ncheck p;").properties["p"]

        assert prop == Atom(BinOp(">", Builtin("parseInt", (Field("#n", "text"),)), Lit(0)))


class TestErrors:
    def test_unknown_check_target(self):
        assert elaboration_error("check nope;") == ElaborationError.UNKNOWN_CHECK_TARGET

    def test_function_is_not_a_property(self):
        assert elaboration_error("let f(x) = x;\ncheck f;") == ElaborationError.UNKNOWN_CHECK_TARGET

    def test_unknown_action_in_with(self):
        source = "let ~p = true;\ncheck p with go!;"

        assert elaboration_error(source) == ElaborationError.UNKNOWN_CHECK_TARGET

    def test_temporal_operator_in_guard(self):
        source = "action go! = click!(`#go`) when always `#a`.on;"

        assert elaboration_error(source) == ElaborationError.TEMPORAL_OPERATOR_IN_EXPRESSION


class TestEggTimer:
    @pytest.fixture
    def spec(self):
        _, spec = load_spec(spec_path(EGGTIMER_SPEC_FILE))
        return spec

    def test_actions(self, spec):
        start = spec.actions["start!"]
        wait = spec.actions["wait!"]

        assert (start.kind, start.descriptor_id, start.args) == (USER_ACTION, "click", ("#toggle",))
        assert start.guard == BinOp("==", Field("#toggle", "text"), Lit("start"))
        assert (wait.descriptor_id, wait.args, wait.timeout) == ("noop", (), 100)

    def test_events(self, spec):
        tick = spec.events["tick?"]

        assert (tick.kind, tick.descriptor_id, tick.args) == (EVENT, "changed", ("#remaining",))
        assert "loaded?" in spec.events

    def test_checks(self, spec):
        first, second = spec.checks

        assert first.properties == ("safety", "liveness")
        assert first.allowed is None
        assert second.properties == ("timeUp",)
        assert second.allowed == ("start!", "wait!", "tick?")

    def test_properties_are_closed(self, spec):
        for formula in spec.properties.values():
            assert free_binders(formula) == set()
