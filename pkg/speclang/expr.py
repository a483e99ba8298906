"""
Core state expressions: the non-temporal language atoms, guards and model
effects are written in. Expressions are closed over a single State.
"""

import math
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Set, Tuple, Union

from speclang.errors import EvalError, UnknownField
from speclang.values import State, is_number, type_name, values_equal

COMPARISON_OPS = ["==", "!=", "<", "<=", ">", ">="]
ARITHMETIC_OPS = ["+", "-", "*", "/"]
BOOLEAN_OPS = ["&&", "||"]
BINARY_OPS = COMPARISON_OPS + ARITHMETIC_OPS + BOOLEAN_OPS + ["in"]

BUILTINS = {
    "length": 1,
    "not": 1,
    "parseFloat": 1,
    "parseInt": 1,
    "toString": 1,
}

_INT_PATTERN = re.compile(r"^\s*[+-]?\d+")
_FLOAT_PATTERN = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class Lit:
    value: Any


@dataclass(frozen=True)
class Field:
    selector: str
    field: str

    @property
    def key(self) -> str:
        return field_key(self.selector, self.field)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Happened:
    pass


@dataclass(frozen=True)
class Builtin:
    name: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Cond:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"


@dataclass(frozen=True)
class ListOf:
    items: Tuple["Expr", ...]


@dataclass(frozen=True)
class MapOf:
    entries: Tuple[Tuple[str, "Expr"], ...]


Expr = Union[Lit, Field, Var, Happened, Builtin, BinOp, Cond, ListOf, MapOf]


def _arith(op: str, lhs: Any, rhs: Any) -> Any:
    if op == "+":
        if isinstance(lhs, str) and isinstance(rhs, str):
            return lhs + rhs
        if isinstance(lhs, list) and isinstance(rhs, list):
            return lhs + rhs
    _require_numbers(op, lhs, rhs)
    if op == "+":
        return lhs + rhs
    if op == "-":
        return lhs - rhs
    if op == "*":
        return lhs * rhs
    if rhs == 0:
        raise EvalError("division by zero")

    return lhs / rhs


def _builtin(name: str, args: List[Any]) -> Any:
    (arg,) = args
    if name == "not":
        if not isinstance(arg, bool):
            raise EvalError(f"not() expects a boolean, got {type_name(arg)}")
        return not arg
    if name == "length":
        if isinstance(arg, (str, list, dict)):
            return len(arg)
        raise EvalError(f"length() expects a string, sequence or map, got {type_name(arg)}")
    if name == "parseInt":
        return _parse_number(arg, _INT_PATTERN, int)
    if name == "parseFloat":
        return _parse_number(arg, _FLOAT_PATTERN, float)

    return to_display_string(arg)


def _compare(op: str, lhs: Any, rhs: Any) -> bool:
    if op == "==":
        return values_equal(lhs, rhs)
    if op == "!=":
        return not values_equal(lhs, rhs)
    comparable = (is_number(lhs) and is_number(rhs)) or (
        isinstance(lhs, str) and isinstance(rhs, str)
    )
    if not comparable:
        raise EvalError(
            f"cannot compare {type_name(lhs)} and {type_name(rhs)} with '{op}'"
        )
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == ">":
        return lhs > rhs

    return lhs >= rhs


def _member(lhs: Any, rhs: Any) -> bool:
    if isinstance(rhs, list):
        return any(values_equal(lhs, item) for item in rhs)
    if isinstance(rhs, str) and isinstance(lhs, str):
        return lhs in rhs
    if isinstance(rhs, dict) and isinstance(lhs, str):
        return lhs in rhs
    raise EvalError(f"'in' cannot test a {type_name(lhs)} against a {type_name(rhs)}")


def _parse_number(arg: Any, pattern: "re.Pattern[str]", kind: Callable[[str], Any]) -> Any:
    if is_number(arg):
        if not math.isfinite(arg):
            raise EvalError(f"cannot parse {arg!r} as a finite number")
        return kind(arg) if kind is float else int(arg)
    if isinstance(arg, str):
        match = pattern.match(arg)
        if match:
            return kind(match.group(0).strip())
    raise EvalError(f"cannot parse {arg!r} as a number")


def _require_bool(value: Any, what: str) -> bool:
    if not isinstance(value, bool):
        raise EvalError(f"{what} must be a boolean, got {type_name(value)}")

    return value


def _require_numbers(op: str, lhs: Any, rhs: Any) -> None:
    if not (is_number(lhs) and is_number(rhs)):
        raise EvalError(
            f"'{op}' expects numbers, got {type_name(lhs)} and {type_name(rhs)}"
        )


def evaluate(expr: Expr, state: State) -> Any:
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Field):
        key = expr.key
        if key not in state.fields:
            raise UnknownField(key)
        return state.fields[key]
    if isinstance(expr, Happened):
        return list(state.happened)
    if isinstance(expr, Var):
        raise EvalError(f"unbound variable '{expr.name}'")
    if isinstance(expr, BinOp):
        if expr.op in BOOLEAN_OPS:
            lhs = _require_bool(evaluate(expr.lhs, state), f"left operand of '{expr.op}'")
            if expr.op == "&&" and not lhs:
                return False
            if expr.op == "||" and lhs:
                return True
            return _require_bool(evaluate(expr.rhs, state), f"right operand of '{expr.op}'")
        lhs = evaluate(expr.lhs, state)
        rhs = evaluate(expr.rhs, state)
        if expr.op in COMPARISON_OPS:
            return _compare(expr.op, lhs, rhs)
        if expr.op == "in":
            return _member(lhs, rhs)
        return _arith(expr.op, lhs, rhs)
    if isinstance(expr, Builtin):
        return _builtin(expr.name, [evaluate(arg, state) for arg in expr.args])
    if isinstance(expr, Cond):
        if _require_bool(evaluate(expr.cond, state), "if condition"):
            return evaluate(expr.then, state)
        return evaluate(expr.else_, state)
    if isinstance(expr, ListOf):
        return [evaluate(item, state) for item in expr.items]
    if isinstance(expr, MapOf):
        return {key: evaluate(value, state) for key, value in expr.entries}

    raise EvalError(f"not an expression: {expr!r}")


def field_key(selector: str, field_name: str) -> str:
    return f"{selector}.{field_name}"


def fields_of(expr: Expr) -> Set[str]:
    """
    Every selector field an expression can read, through both branches of
    every conditional.
    """
    found: Set[str] = set()
    stack: List[Expr] = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Field):
            found.add(node.key)
        elif isinstance(node, BinOp):
            stack.extend([node.lhs, node.rhs])
        elif isinstance(node, Builtin):
            stack.extend(node.args)
        elif isinstance(node, Cond):
            stack.extend([node.cond, node.then, node.else_])
        elif isinstance(node, ListOf):
            stack.extend(node.items)
        elif isinstance(node, MapOf):
            stack.extend(value for _, value in node.entries)

    return found


def free_vars(expr: Expr) -> Set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, BinOp):
        return free_vars(expr.lhs) | free_vars(expr.rhs)
    if isinstance(expr, Builtin):
        return set().union(*(free_vars(arg) for arg in expr.args))
    if isinstance(expr, Cond):
        return free_vars(expr.cond) | free_vars(expr.then) | free_vars(expr.else_)
    if isinstance(expr, ListOf):
        return set().union(*(free_vars(item) for item in expr.items))
    if isinstance(expr, MapOf):
        return set().union(*(free_vars(value) for _, value in expr.entries))

    return set()


def reads_state(expr: Expr) -> bool:
    if isinstance(expr, (Field, Happened)):
        return True
    if isinstance(expr, BinOp):
        return reads_state(expr.lhs) or reads_state(expr.rhs)
    if isinstance(expr, Builtin):
        return any(reads_state(arg) for arg in expr.args)
    if isinstance(expr, Cond):
        return reads_state(expr.cond) or reads_state(expr.then) or reads_state(expr.else_)
    if isinstance(expr, ListOf):
        return any(reads_state(item) for item in expr.items)
    if isinstance(expr, MapOf):
        return any(reads_state(value) for _, value in expr.entries)

    return False


def show_expr(expr: Expr) -> str:
    if isinstance(expr, Lit):
        return show_literal(expr.value)
    if isinstance(expr, Field):
        return f"`{expr.selector}`.{expr.field}"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Happened):
        return "happened"
    if isinstance(expr, BinOp):
        return f"({show_expr(expr.lhs)} {expr.op} {show_expr(expr.rhs)})"
    if isinstance(expr, Builtin):
        return f"{expr.name}({', '.join(show_expr(arg) for arg in expr.args)})"
    if isinstance(expr, Cond):
        return (
            f"if {show_expr(expr.cond)} {{ {show_expr(expr.then)} }}"
            f" else {{ {show_expr(expr.else_)} }}"
        )
    if isinstance(expr, ListOf):
        return f"[{', '.join(show_expr(item) for item in expr.items)}]"

    entries = ", ".join(f"{show_literal(k)}: {show_expr(v)}" for k, v in expr.entries)
    return f"{{{entries}}}"


def show_literal(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, list):
        return f"[{', '.join(show_literal(item) for item in value)}]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{show_literal(k)}: {show_literal(v)}" for k, v in value.items()) + "}"

    return repr(value)


def substitute(expr: Expr, bindings: Dict[str, Expr]) -> Expr:
    """
    Replaces free variables. Replacements are closed, so no capture can
    occur.
    """
    if isinstance(expr, Var):
        return bindings.get(expr.name, expr)
    if isinstance(expr, BinOp):
        return BinOp(expr.op, substitute(expr.lhs, bindings), substitute(expr.rhs, bindings))
    if isinstance(expr, Builtin):
        return Builtin(expr.name, tuple(substitute(arg, bindings) for arg in expr.args))
    if isinstance(expr, Cond):
        return Cond(
            substitute(expr.cond, bindings),
            substitute(expr.then, bindings),
            substitute(expr.else_, bindings),
        )
    if isinstance(expr, ListOf):
        return ListOf(tuple(substitute(item, bindings) for item in expr.items))
    if isinstance(expr, MapOf):
        return MapOf(tuple((k, substitute(v, bindings)) for k, v in expr.entries))

    return expr


def to_display_string(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isfinite(value) and value.is_integer():
            return str(int(value))
        return repr(value)
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)

    return show_literal(value)