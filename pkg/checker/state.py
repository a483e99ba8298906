"""
Trace entries record each observed state together with what produced it.
The checker rewrites `happened` from the cause, using the names the
specification gave to actions and events.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from protocol.messages import Descriptor
from speclang.values import State


@dataclass(frozen=True)
class InitialEvent:
    name: str
    descriptor: Descriptor


@dataclass(frozen=True)
class ActionPerformed:
    name: str
    descriptor: Descriptor


@dataclass(frozen=True)
class EventOccurred:
    names: Tuple[str, ...]
    descriptor: Descriptor


@dataclass(frozen=True)
class TimedOut:
    attributed: Optional[str] = None


Cause = Union[InitialEvent, ActionPerformed, EventOccurred, TimedOut]


@dataclass(frozen=True)
class TraceEntry:
    state: State
    cause: Cause

    @property
    def label(self) -> str:
        return describe_cause(self.cause)


def describe_cause(cause: Cause) -> str:
    if isinstance(cause, InitialEvent):
        return cause.name
    if isinstance(cause, ActionPerformed):
        return f"{cause.name} [{cause.descriptor.label}]"
    if isinstance(cause, EventOccurred):
        return f"{' '.join(cause.names)} [{cause.descriptor.label}]"
    if cause.attributed is None:
        return "timeout"

    return f"timeout after {cause.attributed}"


def synthesize_happened(cause: Cause) -> Tuple[str, ...]:
    if isinstance(cause, (InitialEvent, ActionPerformed)):
        return (cause.name,)
    if isinstance(cause, EventOccurred):
        return cause.names
    if cause.attributed is None:
        return ()

    return (cause.attributed,)


def with_happened(state: State, cause: Cause) -> TraceEntry:
    return TraceEntry(State(state.fields, synthesize_happened(cause)), cause)
