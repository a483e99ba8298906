from typing import FrozenSet, Iterable, Optional

from speclang.syntax import Location
from utils.errors import StromError


class EvalError(StromError):
    """Arithmetic or type error while evaluating an expression."""


class UnknownField(EvalError):
    def __init__(self, key: str):
        super().__init__(f"unknown state field '{key}'")
        self.key = key


class _LocatedError(StromError):
    def __init__(self, message: str, location: Optional[Location]):
        super().__init__(message)
        self.location = location

    def __str__(self) -> str:
        if self.location is None:
            return super().__str__()
        return f"{self.location}: {self.message}"


class SpecSyntaxError(_LocatedError):
    def __init__(self, message: str, location: Location, expected: Iterable[str] = ()):
        self.expected: FrozenSet[str] = frozenset(expected)
        if self.expected:
            message = f"{message}; expected one of {', '.join(sorted(self.expected))}"
        super().__init__(message, location)

    @property
    def column(self) -> int:
        return self.location.column

    @property
    def line(self) -> int:
        return self.location.line


class SpecTypeError(_LocatedError):
    RECURSION_FORBIDDEN = "RecursionForbidden"
    FUNCTION_IN_DATA = "FunctionInData"
    FUNCTION_AS_VALUE = "FunctionAsValue"
    NOT_A_FUNCTION = "NotAFunction"
    ARITY_MISMATCH = "ArityMismatch"
    UNBOUND_NAME = "UnboundName"

    def __init__(self, kind: str, message: str, location: Optional[Location]):
        super().__init__(f"{kind}: {message}", location)
        self.kind = kind


class ElaborationError(_LocatedError):
    STATE_ACCESS_OUTSIDE_TEMPORAL_CONTEXT = "StateAccessOutsideTemporalContext"
    UNKNOWN_CHECK_TARGET = "UnknownCheckTarget"
    TEMPORAL_OPERATOR_IN_EXPRESSION = "TemporalOperatorInExpression"
    INLINING_DEPTH_EXCEEDED = "InliningDepthExceeded"

    def __init__(self, kind: str, message: str, location: Optional[Location]):
        super().__init__(f"{kind}: {message}", location)
        self.kind = kind
