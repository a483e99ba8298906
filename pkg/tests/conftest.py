import os
from typing import Dict, List, Sequence, Tuple

import pytest
from hypothesis import strategies as st

from constants.file import MODEL_DIR, SPEC_DIR
from ltl.formula import (
    BOTTOM,
    TOP,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Freeze,
    NextRequired,
    NextStrong,
    NextWeak,
    Not,
    Or,
    Release,
    Until,
)
from speclang.expr import BinOp, Field, Var
from speclang.values import State

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SELECTORS = ["#a", "#b", "#c"]
FIELD = "on"
MAX_SUBSCRIPT = 3

# A counter button and a periodic ping, for executor and checker sessions.
BUTTON_MODEL = {
    "state": {"#count.value": 0, "#pings.value": 0},
    "actions": {"click(#button)": {"effects": {"#count.value": "`#count`.value + 1"}}},
    "events": [
        {
            "id": "ping",
            "subject": "#pings.value",
            "schedule": {"periodic": 1000},
            "effects": {"#pings.value": "`#pings`.value + 1"},
        }
    ],
    "loadedDelay": 5,
}


def atom(selector: str) -> Atom:
    return Atom(Field(selector, FIELD))


def state(**values: bool) -> State:
    """`state(a=True, b=False)` sets `#a.on` and `#b.on`; the rest are False."""
    fields = {f"{s}.{FIELD}": False for s in SELECTORS}
    for name, value in values.items():
        fields[f"#{name}.{FIELD}"] = value

    return State(fields)


def trace(*values: Dict[str, bool]) -> List[State]:
    return [state(**v) for v in values]


def model_path(name: str) -> str:
    return os.path.join(ROOT, MODEL_DIR, name)


def spec_path(name: str) -> str:
    return os.path.join(ROOT, SPEC_DIR, name)


def golden_path(name: str) -> str:
    return os.path.join(ROOT, "tests", "golden", name)


# --- strategies ---

_fields = st.sampled_from(SELECTORS)
_subscripts = st.integers(min_value=0, max_value=MAX_SUBSCRIPT)

_UNARY = ["not", "next", "nextW", "nextS", "always", "eventually"]
_BINARY = ["and", "or", "until", "release"]


@st.composite
def formulas(draw, depth: int = 4, binders: Tuple[str, ...] = ()) -> Formula:
    """
    Random QuickLTL formulas over three boolean fields. Freeze nodes bind a
    field's value and atoms below may compare another field against it.
    """
    leaves = [st.just(TOP), st.just(BOTTOM), _fields.map(atom)]
    if binders:
        leaves.append(
            st.builds(
                lambda s, b: Atom(BinOp("==", Field(s, FIELD), Var(b))),
                _fields,
                st.sampled_from(binders),
            )
        )
    if depth == 0:
        return draw(st.one_of(leaves))

    kind = draw(st.sampled_from(["leaf"] + _UNARY + _BINARY + ["freeze"]))
    if kind == "leaf":
        return draw(st.one_of(leaves))
    if kind == "freeze":
        binder = f"v{len(binders)}"
        body = draw(formulas(depth - 1, binders + (binder,)))
        return Freeze(binder, Field(draw(_fields), FIELD), body)
    if kind in _UNARY:
        body = draw(formulas(depth - 1, binders))
        if kind == "not":
            return Not(body)
        if kind == "next":
            return NextRequired(body)
        if kind == "nextW":
            return NextWeak(body)
        if kind == "nextS":
            return NextStrong(body)
        n = draw(_subscripts)
        return Always(n, body) if kind == "always" else Eventually(n, body)

    left = draw(formulas(depth - 1, binders))
    right = draw(formulas(depth - 1, binders))
    if kind == "and":
        return And(left, right)
    if kind == "or":
        return Or(left, right)
    n = draw(_subscripts)

    return Until(n, left, right) if kind == "until" else Release(n, left, right)


def traces(min_size: int = 1, max_size: int = 6) -> st.SearchStrategy[Sequence[State]]:
    one_state = st.fixed_dictionaries({s[1:]: st.booleans() for s in SELECTORS}).map(lambda v: state(**v))

    return st.lists(one_state, min_size=min_size, max_size=max_size)


@pytest.fixture
def root_dir() -> str:
    return ROOT
