"""
Source-located abstract syntax of the specification language, as produced by
the parser. Locations never take part in equality, so two parses of the same
program are equal regardless of layout.
"""

from dataclasses import dataclass, field, fields, is_dataclass
from typing import Any, Optional, Tuple, Union

# Temporal keywords
ALWAYS = "always"
EVENTUALLY = "eventually"
UNTIL = "until"
RELEASE = "release"
NEXT = "next"
NEXT_WEAK = "nextW"
NEXT_STRONG = "nextS"

SUBSCRIPTED_OPERATORS = [ALWAYS, EVENTUALLY, UNTIL, RELEASE]
UNARY_TEMPORAL_OPERATORS = [ALWAYS, EVENTUALLY, NEXT, NEXT_WEAK, NEXT_STRONG]
BINARY_TEMPORAL_OPERATORS = [UNTIL, RELEASE]

# Action kinds
USER_ACTION = "userAction"
EVENT = "event"

HAPPENED = "happened"


@dataclass(frozen=True)
class Location:
    line: int
    column: int
    path: Optional[str] = None

    def __str__(self) -> str:
        if self.path:
            return f"{self.path}:{self.line}:{self.column}"
        return f"{self.line}:{self.column}"


def _loc() -> Any:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Literal:
    value: Any
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Selector:
    selector: str
    field: Optional[str] = None
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Name:
    name: str
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Call:
    callee: str
    args: Tuple["Node", ...]
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class BinaryOp:
    op: str
    lhs: "Node"
    rhs: "Node"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Node"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class IfThenElse:
    cond: "Node"
    then: "Node"
    else_: "Node"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class ListLiteral:
    items: Tuple["Node", ...]
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class MapLiteral:
    entries: Tuple[Tuple[str, "Node"], ...]
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class LetIn:
    name: str
    lazy: bool
    value: "Node"
    body: "Node"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Temporal:
    op: str
    subscript: Optional[int]
    operands: Tuple["Node", ...]
    loc: Optional[Location] = _loc()


Node = Union[
    Literal,
    Selector,
    Name,
    Call,
    BinaryOp,
    UnaryOp,
    IfThenElse,
    ListLiteral,
    MapLiteral,
    LetIn,
    Temporal,
]


@dataclass(frozen=True)
class Param:
    name: str
    lazy: bool = False


@dataclass(frozen=True)
class LetBinding:
    name: str
    lazy: bool
    params: Tuple[Param, ...]
    body: Node
    loc: Optional[Location] = _loc()

    @property
    def is_function(self) -> bool:
        return len(self.params) > 0


@dataclass(frozen=True)
class ActionDef:
    name: str
    kind: str
    primitive: Union[Name, Call]
    guard: Optional[Node] = None
    timeout: Optional[int] = None
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class CheckStmt:
    properties: Tuple[str, ...]
    with_actions: Optional[Tuple[str, ...]] = None
    loc: Optional[Location] = _loc()


TopLevel = Union[LetBinding, ActionDef, CheckStmt]


def dump_node(node: Any) -> Any:
    """
    Converts a syntax tree into plain JSON-compatible data, tagging every
    node with its type name. Locations are kept as `[line, column]`.
    """
    if is_dataclass(node) and not isinstance(node, type):
        dumped = {"node": type(node).__name__}
        for f in fields(node):
            value = getattr(node, f.name)
            if f.name == "loc":
                if value is not None:
                    dumped["loc"] = [value.line, value.column]
                continue
            dumped[f.name] = dump_node(value)
        return dumped
    if isinstance(node, (list, tuple)):
        return [dump_node(item) for item in node]

    return node
