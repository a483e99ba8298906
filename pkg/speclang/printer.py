"""
Pretty-printer for parsed programs. Output is fully parenthesized so that
parsing it again gives back an equal syntax tree.
"""

import json
from typing import Any, List

from speclang.syntax import (
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
    dump_node,
)


def _literal(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return json.dumps(value)

    return repr(value)


def _operator(op: str, subscript) -> str:
    return op if subscript is None else f"{op}_{subscript}"


def dump_program(program: List[TopLevel]) -> List[Any]:
    return [dump_node(form) for form in program]


def print_node(node: Node) -> str:
    if isinstance(node, Literal):
        return _literal(node.value)
    if isinstance(node, Selector):
        text = f"`{node.selector}`"
        return text if node.field is None else f"{text}.{node.field}"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Call):
        return f"{node.callee}({', '.join(print_node(arg) for arg in node.args)})"
    if isinstance(node, BinaryOp):
        return f"({print_node(node.lhs)} {node.op} {print_node(node.rhs)})"
    if isinstance(node, UnaryOp):
        return f"({node.op}{print_node(node.operand)})"
    if isinstance(node, IfThenElse):
        return f"(if {print_node(node.cond)} {{ {print_node(node.then)} }} else {{ {print_node(node.else_)} }})"
    if isinstance(node, ListLiteral):
        return f"[{', '.join(print_node(item) for item in node.items)}]"
    if isinstance(node, MapLiteral):
        entries = ", ".join(f"{json.dumps(key)}: {print_node(value)}" for key, value in node.entries)
        return f"{{{entries}}}"
    if isinstance(node, LetIn):
        marker = "~" if node.lazy else ""
        return f"(let {marker}{node.name} = {print_node(node.value)}; {print_node(node.body)})"
    if isinstance(node, Temporal):
        op = _operator(node.op, node.subscript)
        if len(node.operands) == 2:
            return f"({print_node(node.operands[0])} {op} {print_node(node.operands[1])})"
        return f"({op} {print_node(node.operands[0])})"

    raise TypeError(f"cannot print {node!r}")


def print_program(program: List[TopLevel]) -> str:
    return "".join(print_top_level(form) + "\n" for form in program)


def print_top_level(form: TopLevel) -> str:
    if isinstance(form, LetBinding):
        marker = "~" if form.lazy else ""
        params = ""
        if form.params:
            params = "(" + ", ".join(("~" if p.lazy else "") + p.name for p in form.params) + ")"
        return f"let {marker}{form.name}{params} = {print_node(form.body)};"
    if isinstance(form, ActionDef):
        text = f"action {form.name} = {print_node(form.primitive)}"
        if form.timeout is not None:
            text += f" timeout {form.timeout}"
        if form.guard is not None:
            text += f" when {print_node(form.guard)}"
        return text + ";"
    if isinstance(form, CheckStmt):
        text = "check " + " ".join(form.properties)
        if form.with_actions is not None:
            text += " with " + " ".join(form.with_actions)
        return text + ";"

    raise TypeError(f"cannot print {form!r}")
