"""
QuickLTL formulas: temporal operators carry a subscript giving the minimum
number of states that must be observed before a presumptive answer is
allowed.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Set, Union

from speclang.expr import Expr, Var, fields_of, free_vars, show_expr, substitute


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    expr: Expr


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class NextRequired:
    body: "Formula"


@dataclass(frozen=True)
class NextWeak:
    body: "Formula"


@dataclass(frozen=True)
class NextStrong:
    body: "Formula"


@dataclass(frozen=True)
class Always:
    n: int
    body: "Formula"


@dataclass(frozen=True)
class Eventually:
    n: int
    body: "Formula"


@dataclass(frozen=True)
class Until:
    n: int
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Release:
    n: int
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Freeze:
    """Binds `binder` to the value of `expr` in the state where it is unrolled."""

    binder: str
    expr: Expr
    body: "Formula"


Formula = Union[
    Top,
    Bottom,
    Atom,
    Not,
    And,
    Or,
    NextRequired,
    NextWeak,
    NextStrong,
    Always,
    Eventually,
    Until,
    Release,
    Freeze,
]

FORMULA_TYPES = (
    Top,
    Bottom,
    Atom,
    Not,
    And,
    Or,
    NextRequired,
    NextWeak,
    NextStrong,
    Always,
    Eventually,
    Until,
    Release,
    Freeze,
)

NEXT_TYPES = (NextRequired, NextWeak, NextStrong)
SUBSCRIPTED_TYPES = (Always, Eventually, Until, Release)

TOP = Top()
BOTTOM = Bottom()


# --- GUARDED FORM ---


@dataclass(frozen=True)
class GAnd:
    left: "GuardedFormula"
    right: "GuardedFormula"


@dataclass(frozen=True)
class GOr:
    left: "GuardedFormula"
    right: "GuardedFormula"


@dataclass(frozen=True)
class GNextRequired:
    body: Formula


@dataclass(frozen=True)
class GNextWeak:
    body: Formula


@dataclass(frozen=True)
class GNextStrong:
    body: Formula


GuardedFormula = Union[GAnd, GOr, GNextRequired, GNextWeak, GNextStrong]

_fresh_binders = itertools.count(1)


def children(formula: Union[Formula, GuardedFormula]) -> List[Union[Formula, GuardedFormula]]:
    if isinstance(formula, (Not, NextRequired, NextWeak, NextStrong, Always, Eventually, Freeze)):
        return [formula.body]
    if isinstance(formula, (And, Or, Until, Release, GAnd, GOr)):
        return [formula.left, formula.right]
    if isinstance(formula, (GNextRequired, GNextWeak, GNextStrong)):
        return [formula.body]

    return []


def fields_read(formula: Formula) -> Set[str]:
    found: Set[str] = set()
    for node in walk(formula):
        if isinstance(node, Atom):
            found |= fields_of(node.expr)
        elif isinstance(node, Freeze):
            found |= fields_of(node.expr)

    return found


def free_binders(formula: Formula) -> Set[str]:
    if isinstance(formula, Atom):
        return free_vars(formula.expr)
    if isinstance(formula, Freeze):
        return free_vars(formula.expr) | (free_binders(formula.body) - {formula.binder})

    return set().union(*(free_binders(child) for child in children(formula)))


def fresh_binder(name: str) -> str:
    return f"{name}#{next(_fresh_binders)}"


def freeze(binder: str, expr: Expr, body: Formula) -> Freeze:
    """
    Builds a Freeze node, renaming the binder when an inner Freeze on the
    same path already uses the name.
    """
    inner = {node.binder for node in walk(body) if isinstance(node, Freeze)}
    if binder in inner:
        renamed = fresh_binder(binder.split("#", 1)[0])
        body = substitute_formula(body, {binder: Var(renamed)})
        binder = renamed

    return Freeze(binder, expr, body)


def node_count(formula: Union[Formula, GuardedFormula]) -> int:
    return sum(1 for _ in walk(formula))


def show(formula: Union[Formula, GuardedFormula], depth: Optional[int] = None) -> str:
    """
    Renders a formula in specification syntax. With `depth`, subterms below
    that many levels print as `...`.
    """
    if depth is not None:
        if depth <= 0:
            return "..."
        depth -= 1

    def sub(node: Union[Formula, GuardedFormula]) -> str:
        return show(node, depth)

    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bottom):
        return "false"
    if isinstance(formula, Atom):
        return show_expr(formula.expr)
    if isinstance(formula, Not):
        return f"!{sub(formula.body)}"
    if isinstance(formula, (And, GAnd)):
        return f"({sub(formula.left)} && {sub(formula.right)})"
    if isinstance(formula, (Or, GOr)):
        return f"({sub(formula.left)} || {sub(formula.right)})"
    if isinstance(formula, (NextRequired, GNextRequired)):
        return f"next ({sub(formula.body)})"
    if isinstance(formula, (NextWeak, GNextWeak)):
        return f"nextW ({sub(formula.body)})"
    if isinstance(formula, (NextStrong, GNextStrong)):
        return f"nextS ({sub(formula.body)})"
    if isinstance(formula, Always):
        return f"always_{formula.n} ({sub(formula.body)})"
    if isinstance(formula, Eventually):
        return f"eventually_{formula.n} ({sub(formula.body)})"
    if isinstance(formula, Until):
        return f"({sub(formula.left)} until_{formula.n} {sub(formula.right)})"
    if isinstance(formula, Release):
        return f"({sub(formula.left)} release_{formula.n} {sub(formula.right)})"

    return f"{{ let {formula.binder} = {show_expr(formula.expr)}; {sub(formula.body)} }}"


def substitute_formula(formula: Formula, bindings: Dict[str, Expr]) -> Formula:
    """
    Replaces free binder occurrences inside atoms and freeze expressions,
    including under next guards. Inner Freeze nodes shadow their binder.
    """
    if not bindings:
        return formula
    if isinstance(formula, Atom):
        return Atom(substitute(formula.expr, bindings))
    if isinstance(formula, Freeze):
        inner = {k: v for k, v in bindings.items() if k != formula.binder}
        return Freeze(
            formula.binder,
            substitute(formula.expr, bindings),
            substitute_formula(formula.body, inner),
        )
    if isinstance(formula, Not):
        return Not(substitute_formula(formula.body, bindings))
    if isinstance(formula, And):
        return And(
            substitute_formula(formula.left, bindings),
            substitute_formula(formula.right, bindings),
        )
    if isinstance(formula, Or):
        return Or(
            substitute_formula(formula.left, bindings),
            substitute_formula(formula.right, bindings),
        )
    if isinstance(formula, NEXT_TYPES):
        return type(formula)(substitute_formula(formula.body, bindings))
    if isinstance(formula, (Always, Eventually)):
        return type(formula)(formula.n, substitute_formula(formula.body, bindings))
    if isinstance(formula, (Until, Release)):
        return type(formula)(
            formula.n,
            substitute_formula(formula.left, bindings),
            substitute_formula(formula.right, bindings),
        )

    return formula


def walk(formula: Union[Formula, GuardedFormula]) -> Iterator[Union[Formula, GuardedFormula]]:
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))
