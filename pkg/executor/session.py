"""
One executor session over a model. Time is logical: the clock only moves
while the checker is waiting (after Start, or after an Act or Wait that
asked for a timeout), and then only up to the next thing that happens.
"""

import logging
import time
from typing import Any, Dict, List, Optional, Tuple

from constants.defaults import INITIAL_EVENT_ID
from executor.clock import LogicalClock
from executor.errors import ProtocolViolation
from executor.model import Model, ModelEvent, snapshot
from protocol.messages import (
    Act,
    Acted,
    CheckerMessage,
    Descriptor,
    End,
    Event,
    ExecutorMessage,
    Stale,
    Start,
    Timeout,
    Wait,
    executor_accepts,
)
from speclang.values import State

logger = logging.getLogger(__name__)

# Clock items
_LOADED = ("loaded",)
_TIMEOUT = ("timeout",)


class ModelSession:
    def __init__(self, model: Model, auto_advance: bool = True, realtime: bool = False):
        self.model = model
        self.auto_advance = auto_advance
        self.realtime = realtime
        self.clock = LogicalClock()
        self.fields: Dict[str, Any] = dict(model.state)
        self.dependencies: Optional[Tuple[str, ...]] = None
        self.trace_length = 0
        self.loaded = False
        self.ended = False
        self.timeout_handle: Optional[int] = None
        self.transitions = 0

    @property
    def waiting(self) -> bool:
        if self.dependencies is None or self.ended:
            return False

        return not self.loaded or self.timeout_handle is not None

    # --- message handling ---

    def handle(self, msg: CheckerMessage) -> List[ExecutorMessage]:
        if isinstance(msg, Start):
            replies = self._start(msg)
        elif isinstance(msg, Act):
            replies = self._act(msg)
        elif isinstance(msg, Wait):
            replies = self._wait(msg)
        elif isinstance(msg, End):
            self.ended = True
            logger.debug("Session ended at version %d", self.trace_length)
            return []
        else:
            raise ProtocolViolation(f"unexpected message {msg!r}")
        if self.auto_advance:
            replies.extend(self.advance())

        return replies

    def _start(self, msg: Start) -> List[ExecutorMessage]:
        if self.dependencies is not None:
            raise ProtocolViolation("session already started")
        snapshot(self.fields, msg.dependencies)
        self.dependencies = tuple(msg.dependencies)
        self.clock.schedule(self.model.loaded_delay, _LOADED)

        return []

    def _act(self, msg: Act) -> List[ExecutorMessage]:
        self._require_loaded("Act")
        if not executor_accepts(msg.version, self.trace_length):
            logger.debug("Stale Act %s at version %d, trace length %d", msg.action.label, msg.version, self.trace_length)
            return [Stale(self.trace_length)]

        label = msg.action.label
        action = self.model.actions.get(label)
        if action is None:
            logger.debug("Unknown action %s leaves the state unchanged", label)
        elif self.model.enabled(action.guard, self.fields):
            self.fields = self.model.apply(self.fields, action.effects)
            self.transitions += 1
        for event in self.model.events:
            if event.trigger == label:
                self.clock.schedule(event.delay, event)
        reply = self._emit(Acted, msg.action.id)
        if msg.timeout is not None:
            self.timeout_handle = self.clock.schedule(msg.timeout, _TIMEOUT)

        return [reply]

    def _wait(self, msg: Wait) -> List[ExecutorMessage]:
        self._require_loaded("Wait")
        if not executor_accepts(msg.version, self.trace_length):
            return [Stale(self.trace_length)]
        self._cancel_timeout()
        self.timeout_handle = self.clock.schedule(msg.time, _TIMEOUT)

        return []

    def _require_loaded(self, what: str) -> None:
        if self.dependencies is None:
            raise ProtocolViolation(f"{what} before Start")
        if not self.loaded:
            raise ProtocolViolation(f"{what} before the {INITIAL_EVENT_ID} event")

    # --- time ---

    def advance(self) -> List[ExecutorMessage]:
        """
        Moves logical time forward to the next item that produces a message,
        but only while the checker is waiting.
        """
        while self.waiting and self.clock.peek_time() is not None:
            if self.realtime:
                self.sleep_until(self.clock.peek_time())
            _, item = self.clock.pop()
            emitted = self._fire(item)
            if emitted is not None:
                return [emitted]

        return []

    def inject(self, event_id: str) -> List[ExecutorMessage]:
        """
        Fires a model event right now, whether or not the checker is
        waiting. Used to force interleavings in tests.
        """
        for event in self.model.events:
            if event.id == event_id:
                emitted = self._fire_event(event)
                return [emitted] if emitted is not None else []

        raise KeyError(f"the model has no event '{event_id}'")

    def _fire(self, item: Any) -> Optional[ExecutorMessage]:
        if item is _LOADED:
            self.loaded = True
            for event in self.model.events:
                if event.period is not None:
                    self.clock.schedule(event.period, event)
            return self._emit(Event, INITIAL_EVENT_ID, Descriptor(INITIAL_EVENT_ID))
        if item is _TIMEOUT:
            self.timeout_handle = None
            self.trace_length += 1
            return Timeout(self._snapshot(()), self.trace_length)
        if item.period is not None:
            self.clock.schedule(item.period, item)

        return self._fire_event(item)

    def _fire_event(self, event: ModelEvent) -> Optional[ExecutorMessage]:
        if not self.model.enabled(event.enabled, self.fields):
            return None
        self.fields = self.model.apply(self.fields, event.effects)
        self.transitions += 1
        descriptor = event.descriptor

        return self._emit(Event, descriptor.id, descriptor)

    def _emit(self, kind, happened: str, descriptor: Optional[Descriptor] = None) -> ExecutorMessage:
        self._cancel_timeout()
        self.trace_length += 1
        state = self._snapshot((happened,))
        if kind is Event:
            return Event(descriptor, state, self.trace_length)

        return kind(state, self.trace_length)

    def _cancel_timeout(self) -> None:
        if self.timeout_handle is not None:
            self.clock.cancel(self.timeout_handle)
            self.timeout_handle = None

    def _snapshot(self, happened: Tuple[str, ...]) -> State:
        return snapshot(self.fields, self.dependencies, happened)

    def sleep_until(self, fire_time: int) -> None:
        delay = fire_time - self.clock.now
        if delay > 0:
            time.sleep(delay / 1000)

