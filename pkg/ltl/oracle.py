"""
Direct recursive semantics for QuickLTL on a finite trace. Exponential and
only meant as a cross-check for the progression engine in ltl.progression.
"""

from typing import Sequence

from ltl.errors import AtomNotBoolean
from ltl.formula import (
    Always,
    And,
    Atom,
    Bottom,
    Eventually,
    Formula,
    Freeze,
    NextRequired,
    NextStrong,
    NextWeak,
    Not,
    Or,
    Release,
    Top,
    Until,
    substitute_formula,
)
from ltl.verdict import DEMANDS, ExtVerdict, Verdict, ext_and, ext_not, ext_or
from speclang.expr import Lit, evaluate, show_expr
from speclang.values import State, type_name


def _expand(formula: Formula) -> Formula:
    n = formula.n
    if isinstance(formula, Always):
        rest = NextRequired(Always(n - 1, formula.body)) if n > 0 else NextWeak(formula)
        return And(formula.body, rest)
    if isinstance(formula, Eventually):
        rest = NextRequired(Eventually(n - 1, formula.body)) if n > 0 else NextStrong(formula)
        return Or(formula.body, rest)
    if isinstance(formula, Until):
        rest = NextRequired(Until(n - 1, formula.left, formula.right)) if n > 0 else NextStrong(formula)
        return Or(formula.right, And(formula.left, rest))

    rest = NextRequired(Release(n - 1, formula.left, formula.right)) if n > 0 else NextWeak(formula)
    return And(formula.right, Or(formula.left, rest))


def eval_direct(formula: Formula, trace: Sequence[State], index: int = 0) -> ExtVerdict:
    if not 0 <= index < len(trace):
        raise ValueError(f"index {index} outside a trace of length {len(trace)}")

    if isinstance(formula, Top):
        return Verdict.DEFINITELY_TRUE
    if isinstance(formula, Bottom):
        return Verdict.DEFINITELY_FALSE
    if isinstance(formula, Atom):
        value = evaluate(formula.expr, trace[index])
        if not isinstance(value, bool):
            raise AtomNotBoolean(show_expr(formula.expr), type_name(value))
        return Verdict.from_bool(value)
    if isinstance(formula, Not):
        return ext_not(eval_direct(formula.body, trace, index))
    if isinstance(formula, And):
        return ext_and(eval_direct(formula.left, trace, index), eval_direct(formula.right, trace, index))
    if isinstance(formula, Or):
        return ext_or(eval_direct(formula.left, trace, index), eval_direct(formula.right, trace, index))

    last = index == len(trace) - 1
    if isinstance(formula, NextWeak):
        return Verdict.PRESUMABLY_TRUE if last else eval_direct(formula.body, trace, index + 1)
    if isinstance(formula, NextStrong):
        return Verdict.PRESUMABLY_FALSE if last else eval_direct(formula.body, trace, index + 1)
    if isinstance(formula, NextRequired):
        return DEMANDS if last else eval_direct(formula.body, trace, index + 1)
    if isinstance(formula, Freeze):
        value = evaluate(formula.expr, trace[index])
        body = substitute_formula(formula.body, {formula.binder: Lit(value)})
        return eval_direct(body, trace, index)

    return eval_direct(_expand(formula), trace, index)
