"""
Tokenizer for `.strom` sources. Produces a flat token list ending in an EOF
token; every token knows its line and column.
"""

import re
from dataclasses import dataclass
from typing import List, Optional

from speclang.errors import SpecSyntaxError
from speclang.syntax import ALWAYS, EVENTUALLY, NEXT, NEXT_STRONG, NEXT_WEAK, RELEASE, UNTIL, Location

# Token kinds
NUMBER = "NUMBER"
STRING = "STRING"
SELECTOR = "SELECTOR"
IDENT = "IDENT"
KEYWORD = "KEYWORD"
TEMPORAL = "TEMPORAL"
OP = "OP"
EOF = "EOF"

KEYWORDS = [
    "action",
    "check",
    "else",
    "false",
    "if",
    "in",
    "let",
    "null",
    "timeout",
    "true",
    "when",
    "with",
]

_TEMPORAL_WORD = re.compile(
    rf"^({ALWAYS}|{EVENTUALLY}|{UNTIL}|{RELEASE})(?:_(\d+))?$|^({NEXT}|{NEXT_WEAK}|{NEXT_STRONG})$"
)

_TOKEN_SPECS = [
    ("newline", r"\n"),
    ("space", r"[ \t\r]+"),
    ("comment", r"//[^\n]*"),
    (NUMBER, r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"),
    (STRING, r'"(?:\\.|[^"\\\n])*"'),
    (SELECTOR, r"`[^`\n]*`"),
    (IDENT, r"[A-Za-z_][A-Za-z0-9_]*(?:!(?!=)|\?)?"),
    (OP, r"==>|==|!=|<=|>=|&&|\|\||[<>+\-*/!=~.,;:(){}\[\]]"),
    ("mismatch", r"."),
]

_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPECS))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    location: Location
    subscript: Optional[int] = None

    def is_op(self, text: str) -> bool:
        return self.kind == OP and self.text == text

    def is_keyword(self, text: str) -> bool:
        return self.kind == KEYWORD and self.text == text


def tokenize(source: str, path: Optional[str] = None) -> List[Token]:
    tokens: List[Token] = []
    line = 1
    line_start = 0
    for match in _MASTER.finditer(source):
        kind = match.lastgroup
        text = match.group()
        location = Location(line, match.start() - line_start + 1, path)
        if kind == "newline":
            line += 1
            line_start = match.end()
            continue
        if kind in ("space", "comment"):
            continue
        if kind == "mismatch":
            raise SpecSyntaxError(f"unexpected character {text!r}", location)
        if kind == IDENT:
            tokens.append(_classify_word(text, location))
            continue
        tokens.append(Token(kind, text, location))

    tokens.append(Token(EOF, "", Location(line, len(source) - line_start + 1, path)))

    return tokens


def _classify_word(text: str, location: Location) -> Token:
    if text in KEYWORDS:
        return Token(KEYWORD, text, location)
    temporal = _TEMPORAL_WORD.match(text)
    if temporal:
        if temporal.group(3):
            return Token(TEMPORAL, temporal.group(3), location)
        subscript = temporal.group(2)
        return Token(TEMPORAL, temporal.group(1), location, int(subscript) if subscript is not None else None)

    return Token(IDENT, text, location)
