"""
Checker and executor messages. Every message sent after a session starts
carries a version: the trace length at the time it was produced.
"""

from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

from speclang.expr import to_display_string
from speclang.values import State


@dataclass(frozen=True)
class Descriptor:
    id: str
    args: Tuple[Any, ...] = ()

    @property
    def label(self) -> str:
        if not self.args:
            return self.id
        return f"{self.id}({', '.join(to_display_string(arg) for arg in self.args)})"


# --- CHECKER -> EXECUTOR ---


@dataclass(frozen=True)
class Start:
    dependencies: Tuple[str, ...]


@dataclass(frozen=True)
class Act:
    action: Descriptor
    version: int
    timeout: Optional[int] = None


@dataclass(frozen=True)
class Wait:
    time: int
    version: int


@dataclass(frozen=True)
class End:
    pass


# --- EXECUTOR -> CHECKER ---


@dataclass(frozen=True)
class Event:
    event: Descriptor
    state: State
    version: int


@dataclass(frozen=True)
class Acted:
    state: State
    version: int


@dataclass(frozen=True)
class Timeout:
    state: State
    version: int


@dataclass(frozen=True)
class Stale:
    version: int


CheckerMessage = Union[Start, Act, Wait, End]
ExecutorMessage = Union[Event, Acted, Timeout, Stale]
Message = Union[CheckerMessage, ExecutorMessage]


def executor_accepts(act_version: int, executor_trace_length: int) -> bool:
    """
    An Act (or Wait) is only honoured when it was decided on the executor's
    newest state. Versions from the past and from the future are both stale.
    """
    return act_version == executor_trace_length
