"""
The type discipline only separates functions from non-functions. Names must
be defined before use, which also rules out recursion.
"""

from typing import Dict, List, Optional

from speclang.errors import SpecTypeError
from speclang.expr import BUILTINS
from speclang.syntax import (
    HAPPENED,
    ActionDef,
    BinaryOp,
    Call,
    CheckStmt,
    IfThenElse,
    LetBinding,
    LetIn,
    ListLiteral,
    Literal,
    MapLiteral,
    Name,
    Node,
    Selector,
    Temporal,
    TopLevel,
    UnaryOp,
)

# Kinds
VALUE = "value"
FUNCTION = "function"
ACTION = "action"

IMPLICIT_EVENTS = ["loaded?"]


class _Scope:
    def __init__(self, kinds: Dict[str, str], arities: Dict[str, int], defining: Optional[LetBinding]):
        self.kinds = kinds
        self.arities = arities
        self.defining = defining

    def bind_value(self, name: str) -> "_Scope":
        return _Scope({**self.kinds, name: VALUE}, self.arities, self.defining)

    def undefined(self, name: str, node: Node) -> SpecTypeError:
        if self.defining is not None and name == self.defining.name:
            if self.defining.is_function:
                return SpecTypeError(
                    SpecTypeError.RECURSION_FORBIDDEN,
                    f"{name} refers to itself",
                    node.loc,
                )
            return SpecTypeError(
                SpecTypeError.UNBOUND_NAME,
                f"{name} is used before it is defined",
                node.loc,
            )

        return SpecTypeError(SpecTypeError.UNBOUND_NAME, f"{name} is not defined", node.loc)


def _check(node: Node, scope: _Scope) -> None:
    if isinstance(node, (Literal, Selector)):
        return
    if isinstance(node, Name):
        _check_name(node, scope)
        return
    if isinstance(node, Call):
        _check_call(node, scope)
        return
    if isinstance(node, BinaryOp):
        _check(node.lhs, scope)
        _check(node.rhs, scope)
        return
    if isinstance(node, UnaryOp):
        _check(node.operand, scope)
        return
    if isinstance(node, IfThenElse):
        for child in (node.cond, node.then, node.else_):
            _check(child, scope)
        return
    if isinstance(node, (ListLiteral, MapLiteral)):
        items = node.items if isinstance(node, ListLiteral) else [value for _, value in node.entries]
        for item in items:
            if isinstance(item, Name) and scope.kinds.get(item.name) == FUNCTION:
                raise SpecTypeError(
                    SpecTypeError.FUNCTION_IN_DATA,
                    f"function {item.name} cannot be stored in a list or map",
                    item.loc,
                )
            _check(item, scope)
        return
    if isinstance(node, LetIn):
        _check(node.value, scope)
        _check(node.body, scope.bind_value(node.name))
        return
    if isinstance(node, Temporal):
        for operand in node.operands:
            _check(operand, scope)
        return

    raise TypeError(f"not a syntax node: {node!r}")


def _check_call(node: Call, scope: _Scope) -> None:
    kind = scope.kinds.get(node.callee)
    if kind is None and node.callee in BUILTINS:
        expected = BUILTINS[node.callee]
    elif kind == FUNCTION:
        expected = scope.arities[node.callee]
    elif kind is not None:
        raise SpecTypeError(SpecTypeError.NOT_A_FUNCTION, f"{node.callee} is not a function", node.loc)
    else:
        raise scope.undefined(node.callee, node)
    if len(node.args) != expected:
        raise SpecTypeError(
            SpecTypeError.ARITY_MISMATCH,
            f"{node.callee} takes {expected} argument(s), got {len(node.args)}",
            node.loc,
        )
    for arg in node.args:
        _check(arg, scope)


def _check_name(node: Name, scope: _Scope) -> None:
    kind = scope.kinds.get(node.name)
    if kind == FUNCTION:
        raise SpecTypeError(
            SpecTypeError.FUNCTION_AS_VALUE,
            f"function {node.name} is used as a value",
            node.loc,
        )
    if kind is None and node.name != HAPPENED:
        raise scope.undefined(node.name, node)


def typecheck(program: List[TopLevel]) -> Dict[str, str]:
    """
    Checks a parsed program and returns the inferred kind (value, function
    or action) of every top-level name.
    """
    kinds: Dict[str, str] = {name: ACTION for name in IMPLICIT_EVENTS}
    arities: Dict[str, int] = {}
    for form in program:
        if isinstance(form, LetBinding):
            scope = _Scope(dict(kinds), arities, form)
            for param in form.params:
                scope = scope.bind_value(param.name)
            _check(form.body, scope)
            kinds[form.name] = FUNCTION if form.is_function else VALUE
            if form.is_function:
                arities[form.name] = len(form.params)
        elif isinstance(form, ActionDef):
            scope = _Scope(dict(kinds), arities, None)
            if isinstance(form.primitive, Call):
                for arg in form.primitive.args:
                    _check(arg, scope)
            if form.guard is not None:
                _check(form.guard, scope)
            kinds[form.name] = ACTION
        elif isinstance(form, CheckStmt):
            continue

    return kinds
