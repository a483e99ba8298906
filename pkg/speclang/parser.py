"""
Recursive-descent parser for the specification language.

Operator precedence, loosest first:
    ==>  (right-associative)
    ||
    &&
    until, release
    ==  !=
    <  <=  >  >=  in
    +  -
    *  /
    prefix  !  -  always  eventually  next  nextW  nextS
    postfix  call  .field
"""

import json
from typing import List, Optional, Tuple

from speclang.errors import SpecSyntaxError
from speclang.lexer import EOF, IDENT, KEYWORD, NUMBER, OP, SELECTOR, STRING, TEMPORAL, Token, tokenize
from speclang.syntax import (
    BINARY_TEMPORAL_OPERATORS,
    EVENT,
    UNARY_TEMPORAL_OPERATORS,
    USER_ACTION,
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
    Param,
    Selector,
    Temporal,
    TopLevel,
    UnaryOp,
)

_EQUALITY_OPS = ["==", "!="]
_COMPARISON_OPS = ["<", "<=", ">", ">="]
_ADDITIVE_OPS = ["+", "-"]
_MULTIPLICATIVE_OPS = ["*", "/"]
_EXPRESSION_START = ["expression"]


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token helpers ---

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != EOF:
            self.pos += 1

        return token

    def _error(self, expected: List[str], message: Optional[str] = None) -> SpecSyntaxError:
        token = self._peek()
        found = "end of input" if token.kind == EOF else repr(token.text)

        return SpecSyntaxError(message or f"unexpected {found}", token.location, expected)

    def _expect_ident(self, what: str) -> Token:
        token = self._peek()
        if token.kind != IDENT:
            raise self._error([what])

        return self._advance()

    def _expect_keyword(self, text: str) -> Token:
        if not self._peek().is_keyword(text):
            raise self._error([text])

        return self._advance()

    def _expect_op(self, text: str) -> Token:
        if not self._peek().is_op(text):
            raise self._error([repr(text)])

        return self._advance()

    def _match_op(self, *texts: str) -> Optional[Token]:
        token = self._peek()
        if token.kind == OP and token.text in texts:
            return self._advance()

        return None

    def _peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)

        return self.tokens[index]

    # --- top level ---

    def program(self) -> List[TopLevel]:
        forms: List[TopLevel] = []
        while self._peek().kind != EOF:
            forms.append(self.top_level())

        return forms

    def top_level(self) -> TopLevel:
        token = self._peek()
        if token.is_keyword("let"):
            return self.let_binding()
        if token.is_keyword("action"):
            return self.action_def()
        if token.is_keyword("check"):
            return self.check_stmt()

        raise self._error(["let", "action", "check"])

    def let_binding(self) -> LetBinding:
        start = self._expect_keyword("let")
        lazy = self._match_op("~") is not None
        name = self._expect_ident("binding name").text
        params: Tuple[Param, ...] = ()
        if self._match_op("("):
            params = self.params()
        if self._peek().is_op("{"):
            body = self.block()
            self._match_op(";")
        else:
            self._expect_op("=")
            body = self.expression()
            self._expect_op(";")

        return LetBinding(name, lazy, params, body, start.location)

    def params(self) -> Tuple[Param, ...]:
        params: List[Param] = []
        if not self._match_op(")"):
            while True:
                lazy = self._match_op("~") is not None
                params.append(Param(self._expect_ident("parameter name").text, lazy))
                if self._match_op(")"):
                    break
                self._expect_op(",")

        return tuple(params)

    def action_def(self) -> ActionDef:
        start = self._expect_keyword("action")
        name_token = self._expect_ident("action name")
        kind = _action_kind(name_token)
        self._expect_op("=")
        primitive_token = self._expect_ident("primitive")
        if _action_kind(primitive_token) != kind:
            raise SpecSyntaxError(
                f"primitive {primitive_token.text} does not match the kind of {name_token.text}",
                primitive_token.location,
            )
        primitive = Name(primitive_token.text, primitive_token.location)
        if self._match_op("("):
            primitive = Call(primitive_token.text, self.arguments(), primitive_token.location)
        guard = None
        timeout = None
        while True:
            if self._peek().is_keyword("timeout") and timeout is None:
                self._advance()
                timeout = self.timeout_value()
            elif self._peek().is_keyword("when") and guard is None:
                self._advance()
                guard = self.expression()
            else:
                break
        if not self._peek().is_op(";"):
            expected = [";"] + (["timeout"] if timeout is None else []) + (["when"] if guard is None else [])
            raise self._error(expected)
        self._advance()

        return ActionDef(name_token.text, kind, primitive, guard, timeout, start.location)

    def timeout_value(self) -> int:
        token = self._peek()
        if token.kind != NUMBER or not token.text.isdigit():
            raise self._error(["timeout in milliseconds"])
        self._advance()

        return int(token.text)

    def check_stmt(self) -> CheckStmt:
        start = self._expect_keyword("check")
        properties = [self._expect_ident("property name").text]
        while self._peek().kind == IDENT:
            properties.append(self._advance().text)
        with_actions = None
        if self._peek().is_keyword("with"):
            self._advance()
            with_actions = [self._expect_ident("action or event name").text]
            while self._peek().kind == IDENT:
                with_actions.append(self._advance().text)
        if not self._peek().is_op(";"):
            raise self._error([";", "with"] if with_actions is None else [";"])
        self._advance()

        return CheckStmt(
            tuple(properties),
            tuple(with_actions) if with_actions is not None else None,
            start.location,
        )

    # --- expressions ---

    def lone_expression(self) -> Node:
        node = self.expression()
        if self._peek().kind != EOF:
            raise self._error(["end of input"])

        return node

    def expression(self) -> Node:
        return self.implication()

    def implication(self) -> Node:
        lhs = self.disjunction()
        token = self._match_op("==>")
        if token:
            return BinaryOp("==>", lhs, self.implication(), token.location)

        return lhs

    def disjunction(self) -> Node:
        lhs = self.conjunction()
        while True:
            token = self._match_op("||")
            if not token:
                return lhs
            lhs = BinaryOp("||", lhs, self.conjunction(), token.location)

    def conjunction(self) -> Node:
        lhs = self.until()
        while True:
            token = self._match_op("&&")
            if not token:
                return lhs
            lhs = BinaryOp("&&", lhs, self.until(), token.location)

    def until(self) -> Node:
        lhs = self.equality()
        while self._peek().kind == TEMPORAL and self._peek().text in BINARY_TEMPORAL_OPERATORS:
            token = self._advance()
            rhs = self.equality()
            lhs = Temporal(token.text, token.subscript, (lhs, rhs), token.location)

        return lhs

    def equality(self) -> Node:
        return self._binary_level(self.comparison, _EQUALITY_OPS)

    def comparison(self) -> Node:
        lhs = self.additive()
        while True:
            token = self._peek()
            if token.kind == OP and token.text in _COMPARISON_OPS:
                self._advance()
                lhs = BinaryOp(token.text, lhs, self.additive(), token.location)
            elif token.is_keyword("in"):
                self._advance()
                lhs = BinaryOp("in", lhs, self.additive(), token.location)
            else:
                return lhs

    def additive(self) -> Node:
        return self._binary_level(self.multiplicative, _ADDITIVE_OPS)

    def multiplicative(self) -> Node:
        return self._binary_level(self.unary, _MULTIPLICATIVE_OPS)

    def _binary_level(self, operand, ops: List[str]) -> Node:
        lhs = operand()
        while True:
            token = self._match_op(*ops)
            if not token:
                return lhs
            lhs = BinaryOp(token.text, lhs, operand(), token.location)

    def unary(self) -> Node:
        token = self._peek()
        if token.kind == OP and token.text in ("!", "-"):
            self._advance()
            return UnaryOp(token.text, self.unary(), token.location)
        if token.kind == TEMPORAL:
            if token.text not in UNARY_TEMPORAL_OPERATORS:
                raise self._error(_EXPRESSION_START)
            self._advance()
            return Temporal(token.text, token.subscript, (self.unary(),), token.location)

        return self.postfix()

    def postfix(self) -> Node:
        node = self.primary()
        while True:
            token = self._peek()
            if token.is_op("("):
                if not isinstance(node, Name):
                    raise self._error([], "only named functions can be called")
                self._advance()
                node = Call(node.name, self.arguments(), node.loc)
            elif token.is_op("."):
                if not isinstance(node, Selector) or node.field is not None:
                    raise self._error([], "field projection only applies to a selector")
                self._advance()
                field_token = self._expect_ident("field name")
                node = Selector(node.selector, field_token.text, node.loc)
            else:
                return node

    def arguments(self) -> Tuple[Node, ...]:
        args: List[Node] = []
        if not self._match_op(")"):
            while True:
                args.append(self.expression())
                if self._match_op(")"):
                    break
                if not self._peek().is_op(","):
                    raise self._error([",", ")"])
                self._advance()

        return tuple(args)

    def primary(self) -> Node:
        token = self._peek()
        if token.kind == NUMBER:
            self._advance()
            return Literal(_number(token.text), token.location)
        if token.kind == STRING:
            self._advance()
            return Literal(json.loads(token.text), token.location)
        if token.kind == SELECTOR:
            self._advance()
            return Selector(token.text[1:-1], None, token.location)
        if token.kind == IDENT:
            self._advance()
            return Name(token.text, token.location)
        if token.kind == KEYWORD:
            if token.text in ("true", "false", "null"):
                self._advance()
                return Literal({"true": True, "false": False, "null": None}[token.text], token.location)
            if token.text == "if":
                return self.if_then_else()
            if token.text == "let":
                return self.let_in()
        if token.is_op("("):
            self._advance()
            node = self.expression()
            self._expect_op(")")
            return node
        if token.is_op("["):
            return self.list_literal()
        if token.is_op("{"):
            if self._starts_map():
                return self.map_literal()
            return self.block()

        raise self._error(_EXPRESSION_START)

    def if_then_else(self) -> Node:
        start = self._expect_keyword("if")
        cond = self.expression()
        then = self.block()
        self._expect_keyword("else")
        if self._peek().is_keyword("if"):
            else_ = self.if_then_else()
        else:
            else_ = self.block()

        return IfThenElse(cond, then, else_, start.location)

    def let_in(self) -> Node:
        start = self._expect_keyword("let")
        lazy = self._match_op("~") is not None
        name = self._expect_ident("binding name").text
        self._expect_op("=")
        value = self.expression()
        self._expect_op(";")
        body = self.expression()

        return LetIn(name, lazy, value, body, start.location)

    def block(self) -> Node:
        self._expect_op("{")
        if self._peek().is_keyword("let"):
            node = self.let_in()
        else:
            node = self.expression()
        self._expect_op("}")

        return node

    def list_literal(self) -> Node:
        start = self._expect_op("[")
        items: List[Node] = []
        if not self._match_op("]"):
            while True:
                items.append(self.expression())
                if self._match_op("]"):
                    break
                if not self._peek().is_op(","):
                    raise self._error([",", "]"])
                self._advance()

        return ListLiteral(tuple(items), start.location)

    def map_literal(self) -> Node:
        start = self._expect_op("{")
        entries: List[Tuple[str, Node]] = []
        if not self._match_op("}"):
            while True:
                key = self._advance()
                if key.kind not in (STRING, IDENT):
                    raise SpecSyntaxError("map keys are strings or names", key.location, ["map key"])
                self._expect_op(":")
                entries.append((json.loads(key.text) if key.kind == STRING else key.text, self.expression()))
                if self._match_op("}"):
                    break
                if not self._peek().is_op(","):
                    raise self._error([",", "}"])
                self._advance()

        return MapLiteral(tuple(entries), start.location)

    def _starts_map(self) -> bool:
        following = self._peek(1)
        if following.is_op("}"):
            return True

        return following.kind in (STRING, IDENT) and self._peek(2).is_op(":")


def _action_kind(token: Token) -> str:
    if token.text.endswith("!"):
        return USER_ACTION
    if token.text.endswith("?"):
        return EVENT

    raise SpecSyntaxError(
        f"{token.text} must end with '!' (user action) or '?' (event)", token.location, ["action name"]
    )


def _number(text: str):
    if "." in text or "e" in text or "E" in text:
        return float(text)

    return int(text)


def parse(source: str, path: Optional[str] = None) -> List[TopLevel]:
    return _Parser(tokenize(source, path)).program()


def parse_expression(source: str, path: Optional[str] = None) -> Node:
    return _Parser(tokenize(source, path)).lone_expression()
