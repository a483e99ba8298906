"""
Elaboration turns a typechecked program into closed property formulas and
resolved action tables by inlining every binding and function application.

Expressions are elaborated in one of three contexts:

    static    eager top-level bindings and primitive arguments; reading
              state is an error
    state     action guards; state may be read, temporal operators may not
    temporal  properties; eager bindings that read state become Freeze nodes
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

from constants.defaults import DEFAULT_SUBSCRIPT
from ltl.formula import (
    FORMULA_TYPES,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    NextRequired,
    NextStrong,
    NextWeak,
    Not,
    Or,
    Release,
    Until,
    freeze,
    fresh_binder,
)
from speclang.errors import ElaborationError, EvalError, SpecTypeError
from speclang.expr import (
    BUILTINS,
    BinOp,
    Builtin,
    Cond,
    Expr,
    Field,
    Happened,
    ListOf,
    Lit,
    MapOf,
    Var,
    evaluate,
    reads_state,
    substitute,
)
from speclang.syntax import (
    ALWAYS,
    EVENT,
    EVENTUALLY,
    HAPPENED,
    NEXT,
    NEXT_STRONG,
    NEXT_WEAK,
    RELEASE,
    UNTIL,
    ActionDef,
    BinaryOp,
    Call,
    CheckStmt,
    IfThenElse,
    LetBinding,
    LetIn,
    ListLiteral,
    Literal,
    Location,
    MapLiteral,
    Name,
    Node,
    Param,
    Selector,
    Temporal,
    TopLevel,
    UnaryOp,
)
from speclang.typecheck import IMPLICIT_EVENTS
from speclang.values import State

logger = logging.getLogger(__name__)

# Contexts
STATIC = "static"
STATE = "state"
TEMPORAL = "temporal"

Elaborated = Union[Expr, Formula]

_UNARY_TEMPORAL = {ALWAYS: Always, EVENTUALLY: Eventually}
_NEXT = {NEXT: NextRequired, NEXT_WEAK: NextWeak, NEXT_STRONG: NextStrong}
_BINARY_TEMPORAL = {UNTIL: Until, RELEASE: Release}


@dataclass(frozen=True)
class ActionSpec:
    name: str
    kind: str
    descriptor_id: str
    args: Tuple[Any, ...]
    guard: Optional[Expr] = None
    timeout: Optional[int] = None

    @property
    def is_event(self) -> bool:
        return self.kind == EVENT


@dataclass(frozen=True)
class CheckConfig:
    properties: Tuple[str, ...]
    allowed: Optional[Tuple[str, ...]]
    default_subscript: int = DEFAULT_SUBSCRIPT


@dataclass(frozen=True)
class ElaboratedSpec:
    properties: Dict[str, Formula]
    actions: Dict[str, ActionSpec]
    events: Dict[str, ActionSpec]
    checks: List[CheckConfig]

    def lookup(self, name: str) -> Optional[ActionSpec]:
        return self.actions.get(name) or self.events.get(name)


# --- environment entries ---


@dataclass(frozen=True)
class _Lazy:
    node: Node
    env: "Dict[str, Any]"
    top_level: bool = False
    depth: int = 0


@dataclass(frozen=True)
class _Bound:
    value: Elaborated


@dataclass(frozen=True)
class _Function:
    binding: LetBinding
    env: "Dict[str, Any]"


@dataclass(frozen=True)
class _ActionName:
    name: str


def _is_formula(value: Elaborated) -> bool:
    return isinstance(value, FORMULA_TYPES)


def _as_formula(value: Elaborated) -> Formula:
    return value if _is_formula(value) else Atom(value)


class _Elaborator:
    def __init__(self, default_subscript: int, depth_limit: int):
        self.default_subscript = default_subscript
        self.depth_limit = depth_limit
        self.depth = 0

    def node(self, node: Node, env: Dict[str, Any], ctx: str) -> Elaborated:
        if isinstance(node, Literal):
            return Lit(node.value)
        if isinstance(node, Selector):
            if node.field is None:
                return Lit(node.selector)
            self._require_state(ctx, f"`{node.selector}`.{node.field}", node.loc)
            return Field(node.selector, node.field)
        if isinstance(node, Name):
            return self.name(node, env, ctx)
        if isinstance(node, Call):
            return self.call(node, env, ctx)
        if isinstance(node, BinaryOp):
            return self.binary(node, env, ctx)
        if isinstance(node, UnaryOp):
            operand = self.node(node.operand, env, ctx)
            if node.op == "-":
                return BinOp("-", Lit(0), self.as_expr(operand, node.loc))
            if _is_formula(operand):
                return Not(operand)
            return Builtin("not", (operand,))
        if isinstance(node, IfThenElse):
            cond = self.as_expr(self.node(node.cond, env, ctx), node.loc)
            then = self.node(node.then, env, ctx)
            else_ = self.node(node.else_, env, ctx)
            if _is_formula(then) or _is_formula(else_):
                return Or(
                    And(Atom(cond), _as_formula(then)),
                    And(Not(Atom(cond)), _as_formula(else_)),
                )
            return Cond(cond, then, else_)
        if isinstance(node, ListLiteral):
            return ListOf(tuple(self.as_expr(self.node(item, env, ctx), node.loc) for item in node.items))
        if isinstance(node, MapLiteral):
            return MapOf(
                tuple((key, self.as_expr(self.node(value, env, ctx), node.loc)) for key, value in node.entries)
            )
        if isinstance(node, LetIn):
            return self.apply([Param(node.name, node.lazy)], [node.value], node.body, env, env, ctx, node.loc, False)
        if isinstance(node, Temporal):
            return self.temporal(node, env, ctx)

        raise TypeError(f"not a syntax node: {node!r}")

    def name(self, node: Name, env: Dict[str, Any], ctx: str) -> Elaborated:
        if node.name == HAPPENED and node.name not in env:
            self._require_state(ctx, HAPPENED, node.loc)
            return Happened()
        entry = env.get(node.name)
        if entry is None:
            raise SpecTypeError(SpecTypeError.UNBOUND_NAME, f"{node.name} is not defined", node.loc)
        if isinstance(entry, _ActionName):
            return Lit(entry.name)
        if isinstance(entry, _Bound):
            return entry.value
        if isinstance(entry, _Lazy):
            if entry.top_level:
                return self._inline(entry.node, entry.env, ctx, node.loc)
            outer = self.depth
            self.depth = entry.depth
            try:
                return self.node(entry.node, entry.env, ctx)
            finally:
                self.depth = outer

        raise SpecTypeError(SpecTypeError.FUNCTION_AS_VALUE, f"function {node.name} is used as a value", node.loc)

    def call(self, node: Call, env: Dict[str, Any], ctx: str) -> Elaborated:
        entry = env.get(node.callee)
        if isinstance(entry, _Function):
            binding = entry.binding
            return self.apply(list(binding.params), list(node.args), binding.body, env, entry.env, ctx, node.loc)
        if node.callee not in BUILTINS:
            raise SpecTypeError(SpecTypeError.UNBOUND_NAME, f"{node.callee} is not defined", node.loc)
        if len(node.args) != BUILTINS[node.callee]:
            raise SpecTypeError(
                SpecTypeError.ARITY_MISMATCH,
                f"{node.callee} takes {BUILTINS[node.callee]} argument(s), got {len(node.args)}",
                node.loc,
            )
        args = tuple(self.as_expr(self.node(arg, env, ctx), node.loc) for arg in node.args)

        return Builtin(node.callee, args)

    def apply(
        self,
        params: List[Param],
        args: List[Node],
        body: Node,
        caller_env: Dict[str, Any],
        callee_env: Dict[str, Any],
        ctx: str,
        loc: Optional[Location],
        function_body: bool = True,
    ) -> Elaborated:
        """
        Binds parameters and elaborates a body. Lazy parameters are inlined
        at each use; eager ones reading state are frozen where the call
        happens when the context is temporal.
        """
        inner = dict(callee_env)
        frozen: List[Tuple[str, Expr]] = []
        for param, arg in zip(params, args):
            if param.lazy:
                inner[param.name] = _Lazy(arg, caller_env, depth=self.depth)
                continue
            value = self.node(arg, caller_env, ctx)
            if ctx == TEMPORAL and not _is_formula(value) and reads_state(value):
                binder = fresh_binder(param.name)
                frozen.append((binder, value))
                inner[param.name] = _Bound(Var(binder))
            else:
                inner[param.name] = _Bound(value)
        if function_body:
            result = self._inline(body, inner, ctx, loc)
        else:
            result = self.node(body, inner, ctx)
        for binder, value in reversed(frozen):
            if _is_formula(result):
                result = freeze(binder, value, result)
            else:
                result = substitute(result, {binder: value})

        return result

    def binary(self, node: BinaryOp, env: Dict[str, Any], ctx: str) -> Elaborated:
        lhs = self.node(node.lhs, env, ctx)
        rhs = self.node(node.rhs, env, ctx)
        temporal = _is_formula(lhs) or _is_formula(rhs)
        if node.op == "&&":
            return And(_as_formula(lhs), _as_formula(rhs)) if temporal else BinOp("&&", lhs, rhs)
        if node.op == "||":
            return Or(_as_formula(lhs), _as_formula(rhs)) if temporal else BinOp("||", lhs, rhs)
        if node.op == "==>":
            if temporal:
                return Or(Not(_as_formula(lhs)), _as_formula(rhs))
            return BinOp("||", Builtin("not", (lhs,)), rhs)

        return BinOp(node.op, self.as_expr(lhs, node.loc), self.as_expr(rhs, node.loc))

    def temporal(self, node: Temporal, env: Dict[str, Any], ctx: str) -> Formula:
        if ctx == STATE:
            raise ElaborationError(
                ElaborationError.TEMPORAL_OPERATOR_IN_EXPRESSION,
                f"temporal operator {node.op} in a state expression",
                node.loc,
            )
        operands = [_as_formula(self.node(operand, env, TEMPORAL)) for operand in node.operands]
        n = node.subscript if node.subscript is not None else self.default_subscript
        if node.op in _NEXT:
            return _NEXT[node.op](operands[0])
        if node.op in _UNARY_TEMPORAL:
            return _UNARY_TEMPORAL[node.op](n, operands[0])

        return _BINARY_TEMPORAL[node.op](n, operands[0], operands[1])

    def as_expr(self, value: Elaborated, loc: Optional[Location]) -> Expr:
        if _is_formula(value):
            raise ElaborationError(
                ElaborationError.TEMPORAL_OPERATOR_IN_EXPRESSION,
                "a temporal formula cannot be used as a value",
                loc,
            )

        return value

    def _inline(self, node: Node, env: Dict[str, Any], ctx: str, loc: Optional[Location]) -> Elaborated:
        self.depth += 1
        try:
            if self.depth > self.depth_limit:
                raise ElaborationError(
                    ElaborationError.INLINING_DEPTH_EXCEEDED,
                    f"inlining nested deeper than {self.depth_limit} levels",
                    loc,
                )
            return self.node(node, env, ctx)
        finally:
            self.depth -= 1

    def _require_state(self, ctx: str, what: str, loc: Optional[Location]) -> None:
        if ctx == STATIC:
            raise ElaborationError(
                ElaborationError.STATE_ACCESS_OUTSIDE_TEMPORAL_CONTEXT,
                f"{what} reads application state outside a temporal context",
                loc,
            )


def _descriptor_id(primitive_name: str) -> str:
    return primitive_name.rstrip("!?")


def _static_value(expr: Expr, loc: Optional[Location]) -> Any:
    try:
        return evaluate(expr, State())
    except EvalError as e:
        raise ElaborationError(
            ElaborationError.STATE_ACCESS_OUTSIDE_TEMPORAL_CONTEXT,
            f"primitive argument is not a constant: {e.message}",
            loc,
        ) from e


def elaborate(program: List[TopLevel], default_subscript: int = DEFAULT_SUBSCRIPT) -> ElaboratedSpec:
    bindings_count = sum(1 for form in program if isinstance(form, LetBinding))
    elaborator = _Elaborator(default_subscript, depth_limit=bindings_count)
    env: Dict[str, Any] = {}
    actions: Dict[str, ActionSpec] = {}
    events: Dict[str, ActionSpec] = {}
    bindings: Dict[str, LetBinding] = {}
    for name in IMPLICIT_EVENTS:
        env[name] = _ActionName(name)
        events[name] = ActionSpec(name, EVENT, _descriptor_id(name), ())

    check_stmts: List[CheckStmt] = []
    for form in program:
        if isinstance(form, LetBinding):
            bindings[form.name] = form
            if form.is_function:
                env[form.name] = _Function(form, dict(env))
            elif form.lazy:
                env[form.name] = _Lazy(form.body, dict(env), top_level=True)
            else:
                env[form.name] = _Bound(elaborator.node(form.body, dict(env), STATIC))
        elif isinstance(form, ActionDef):
            spec = _action_spec(form, elaborator, env)
            (events if form.kind == EVENT else actions)[form.name] = spec
            env[form.name] = _ActionName(form.name)
        elif isinstance(form, CheckStmt):
            check_stmts.append(form)

    properties: Dict[str, Formula] = {}
    checks: List[CheckConfig] = []
    for stmt in check_stmts:
        for name in stmt.properties:
            entry = env.get(name)
            if name not in bindings or isinstance(entry, _Function):
                raise ElaborationError(
                    ElaborationError.UNKNOWN_CHECK_TARGET,
                    f"{name} is not a property",
                    stmt.loc,
                )
            if name not in properties:
                properties[name] = _as_formula(elaborator.name(Name(name, stmt.loc), env, TEMPORAL))
        if stmt.with_actions is not None:
            for name in stmt.with_actions:
                if name not in actions and name not in events:
                    raise ElaborationError(
                        ElaborationError.UNKNOWN_CHECK_TARGET,
                        f"{name} is not a defined action or event",
                        stmt.loc,
                    )
        checks.append(CheckConfig(stmt.properties, stmt.with_actions, default_subscript))
    logger.debug("elaborated %d properties, %d actions, %d events", len(properties), len(actions), len(events))

    return ElaboratedSpec(properties, actions, events, checks)


def _action_spec(form: ActionDef, elaborator: _Elaborator, env: Dict[str, Any]) -> ActionSpec:
    args: Tuple[Any, ...] = ()
    if isinstance(form.primitive, Call):
        args = tuple(
            _static_value(elaborator.as_expr(elaborator.node(arg, env, STATIC), form.loc), form.loc)
            for arg in form.primitive.args
        )
    guard = None
    if form.guard is not None:
        guard = elaborator.as_expr(elaborator.node(form.guard, env, STATE), form.loc)
    primitive_name = form.primitive.callee if isinstance(form.primitive, Call) else form.primitive.name

    return ActionSpec(form.name, form.kind, _descriptor_id(primitive_name), args, guard, form.timeout)


def elaborate_expression(node: Node) -> Expr:
    """
    Elaborates a stand-alone state expression such as a model guard or
    effect. Only literals, selectors, builtins and operators are allowed.
    """
    elaborator = _Elaborator(DEFAULT_SUBSCRIPT, depth_limit=1)

    return elaborator.as_expr(elaborator.node(node, {}, STATE), node.loc)
