"""
Formula progression: unroll a formula against one state, simplify the result
to a constant or a guarded form, give presumptive answers at the end of a
trace and step guarded forms forward to the next state.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from constants.defaults import FORMULA_NODE_CAP, FORMULA_SHOW_DEPTH
from ltl.errors import AtomNotBoolean, FormulaBlowUp
from ltl.formula import (
    BOTTOM,
    TOP,
    Always,
    And,
    Atom,
    Bottom,
    Eventually,
    Formula,
    Freeze,
    GAnd,
    GNextRequired,
    GNextStrong,
    GNextWeak,
    GOr,
    GuardedFormula,
    NextRequired,
    NextStrong,
    NextWeak,
    Not,
    Or,
    Release,
    Top,
    Until,
    node_count,
    show,
    substitute_formula,
)
from ltl.verdict import DEMANDS, ExtVerdict, Verdict
from speclang.expr import Lit, evaluate, show_expr
from speclang.values import State, type_name
from utils.errors import StromError


@dataclass(frozen=True)
class Definitive:
    verdict: Verdict


@dataclass(frozen=True)
class Guarded:
    formula: GuardedFormula


Simplified = Union[Definitive, Guarded]


@dataclass(frozen=True)
class Outcome:
    verdict: ExtVerdict
    states_consumed: int
    definitive_at: Optional[int] = None


def _atom_value(atom: Atom, state: State) -> Formula:
    value = evaluate(atom.expr, state)
    if not isinstance(value, bool):
        raise AtomNotBoolean(show_expr(atom.expr), type_name(value))

    return TOP if value else BOTTOM


def _fold_presumptive(formula: GuardedFormula) -> Verdict:
    if isinstance(formula, GNextWeak):
        return Verdict.DEFINITELY_TRUE
    if isinstance(formula, GNextStrong):
        return Verdict.DEFINITELY_FALSE
    if isinstance(formula, GAnd):
        return _fold_presumptive(formula.left).meet(_fold_presumptive(formula.right))

    return _fold_presumptive(formula.left).join(_fold_presumptive(formula.right))


def _guard_and(left: Union[bool, GuardedFormula], right: Union[bool, GuardedFormula]) -> Union[bool, GuardedFormula]:
    if left is False or right is False:
        return False
    if left is True:
        return right
    if right is True or left == right:
        return left

    return GAnd(left, right)


def _guard_or(left: Union[bool, GuardedFormula], right: Union[bool, GuardedFormula]) -> Union[bool, GuardedFormula]:
    if left is True or right is True:
        return True
    if left is False:
        return right
    if right is False or left == right:
        return left

    return GOr(left, right)


def _normalize(formula: Formula) -> Union[bool, GuardedFormula]:
    if isinstance(formula, Top):
        return True
    if isinstance(formula, Bottom):
        return False
    if isinstance(formula, And):
        return _guard_and(_normalize(formula.left), _normalize(formula.right))
    if isinstance(formula, Or):
        return _guard_or(_normalize(formula.left), _normalize(formula.right))
    if isinstance(formula, NextRequired):
        return GNextRequired(formula.body)
    if isinstance(formula, NextWeak):
        return GNextWeak(formula.body)
    if isinstance(formula, NextStrong):
        return GNextStrong(formula.body)
    if isinstance(formula, Not):
        return _normalize_negation(formula.body)

    raise StromError(f"cannot simplify a formula that was not unrolled: {type(formula).__name__}")


def _normalize_negation(formula: Formula) -> Union[bool, GuardedFormula]:
    if isinstance(formula, Top):
        return False
    if isinstance(formula, Bottom):
        return True
    if isinstance(formula, Not):
        return _normalize(formula.body)
    if isinstance(formula, And):
        return _guard_or(_normalize_negation(formula.left), _normalize_negation(formula.right))
    if isinstance(formula, Or):
        return _guard_and(_normalize_negation(formula.left), _normalize_negation(formula.right))
    if isinstance(formula, NextWeak):
        return GNextStrong(negate_formula(formula.body))
    if isinstance(formula, NextStrong):
        return GNextWeak(negate_formula(formula.body))
    if isinstance(formula, NextRequired):
        return GNextRequired(negate_formula(formula.body))

    raise StromError(f"cannot simplify a formula that was not unrolled: {type(formula).__name__}")


def evaluate_trace(formula: Formula, trace: Sequence[State]) -> Outcome:
    """
    Runs the unroll/simplify/step loop over a finite trace. Stops at the
    first state that settles the formula; otherwise gives the presumptive
    answer of the last guarded form.
    """
    if not trace:
        raise ValueError("evaluate_trace needs a non-empty trace")

    current: Formula = formula
    guarded: Optional[GuardedFormula] = None
    for index, state in enumerate(trace):
        try:
            result: Simplified = progress(current, state)
        except StromError as e:
            e.state_index = index
            raise
        if isinstance(result, Definitive):
            return Outcome(result.verdict, index + 1, index)
        guarded = result.formula
        if index < len(trace) - 1:
            current = step_forward(guarded)

    return Outcome(presumptive(guarded), len(trace), None)


def negate_formula(formula: Formula) -> Formula:
    """
    Pushes a negation through the top of a formula using the duality
    identities, stopping at atoms.
    """
    if isinstance(formula, Top):
        return BOTTOM
    if isinstance(formula, Bottom):
        return TOP
    if isinstance(formula, Atom):
        return Not(formula)
    if isinstance(formula, Not):
        return formula.body
    if isinstance(formula, And):
        return Or(negate_formula(formula.left), negate_formula(formula.right))
    if isinstance(formula, Or):
        return And(negate_formula(formula.left), negate_formula(formula.right))
    if isinstance(formula, NextWeak):
        return NextStrong(negate_formula(formula.body))
    if isinstance(formula, NextStrong):
        return NextWeak(negate_formula(formula.body))
    if isinstance(formula, NextRequired):
        return NextRequired(negate_formula(formula.body))
    if isinstance(formula, Always):
        return Eventually(formula.n, negate_formula(formula.body))
    if isinstance(formula, Eventually):
        return Always(formula.n, negate_formula(formula.body))
    if isinstance(formula, Until):
        return Release(formula.n, negate_formula(formula.left), negate_formula(formula.right))
    if isinstance(formula, Release):
        return Until(formula.n, negate_formula(formula.left), negate_formula(formula.right))

    return Freeze(formula.binder, formula.expr, negate_formula(formula.body))


def presumptive(formula: GuardedFormula) -> ExtVerdict:
    if requires_next(formula):
        return DEMANDS

    return _fold_presumptive(formula).weaken()


def progress(formula: Formula, state: State, node_cap: int = FORMULA_NODE_CAP) -> Simplified:
    return simplify(unroll(formula, state), node_cap)


def requires_next(formula: GuardedFormula) -> bool:
    return any(isinstance(node, GNextRequired) for node in _guard_leaves(formula))


def simplify(formula: Formula, node_cap: int = FORMULA_NODE_CAP) -> Simplified:
    nodes = node_count(formula)
    if nodes > node_cap:
        raise FormulaBlowUp(nodes, node_cap, show(formula, FORMULA_SHOW_DEPTH))

    result = _normalize(formula)
    if result is True:
        return Definitive(Verdict.DEFINITELY_TRUE)
    if result is False:
        return Definitive(Verdict.DEFINITELY_FALSE)

    return Guarded(result)


def step_forward(formula: GuardedFormula) -> Formula:
    if isinstance(formula, GAnd):
        return And(step_forward(formula.left), step_forward(formula.right))
    if isinstance(formula, GOr):
        return Or(step_forward(formula.left), step_forward(formula.right))

    return formula.body


def to_formula(formula: GuardedFormula) -> Formula:
    if isinstance(formula, GAnd):
        return And(to_formula(formula.left), to_formula(formula.right))
    if isinstance(formula, GOr):
        return Or(to_formula(formula.left), to_formula(formula.right))
    if isinstance(formula, GNextRequired):
        return NextRequired(formula.body)
    if isinstance(formula, GNextWeak):
        return NextWeak(formula.body)

    return NextStrong(formula.body)


def unroll(formula: Formula, state: State) -> Formula:
    if isinstance(formula, (Top, Bottom)):
        return formula
    if isinstance(formula, Atom):
        return _atom_value(formula, state)
    if isinstance(formula, Not):
        return Not(unroll(formula.body, state))
    if isinstance(formula, And):
        return And(unroll(formula.left, state), unroll(formula.right, state))
    if isinstance(formula, Or):
        return Or(unroll(formula.left, state), unroll(formula.right, state))
    if isinstance(formula, (NextRequired, NextWeak, NextStrong)):
        return formula
    if isinstance(formula, Freeze):
        value = evaluate(formula.expr, state)
        body = substitute_formula(formula.body, {formula.binder: Lit(value)})
        return unroll(body, state)
    if isinstance(formula, Always):
        if formula.n > 0:
            return And(unroll(formula.body, state), NextRequired(Always(formula.n - 1, formula.body)))
        return And(unroll(formula.body, state), NextWeak(formula))
    if isinstance(formula, Eventually):
        if formula.n > 0:
            return Or(unroll(formula.body, state), NextRequired(Eventually(formula.n - 1, formula.body)))
        return Or(unroll(formula.body, state), NextStrong(formula))
    if isinstance(formula, Until):
        rest = Until(max(formula.n - 1, 0), formula.left, formula.right)
        guard = NextRequired(rest) if formula.n > 0 else NextStrong(formula)
        return Or(unroll(formula.right, state), And(unroll(formula.left, state), guard))
    if isinstance(formula, Release):
        rest = Release(max(formula.n - 1, 0), formula.left, formula.right)
        guard = NextRequired(rest) if formula.n > 0 else NextWeak(formula)
        return And(unroll(formula.right, state), Or(unroll(formula.left, state), guard))

    raise StromError(f"not a formula: {formula!r}")


def _guard_leaves(formula: GuardedFormula):
    return (
        node
        for node in _walk_guards(formula)
        if isinstance(node, (GNextRequired, GNextWeak, GNextStrong))
    )


def _walk_guards(formula: GuardedFormula):
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (GAnd, GOr)):
            stack.extend([node.left, node.right])
