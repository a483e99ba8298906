"""
Model files describe a labeled transition system: declared state fields,
guarded actions keyed by descriptor label, and scheduled events. All
expressions use the specification language's expression grammar.
"""

import copy
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional

from constants.protocol import CHANGED_EVENT_ID, HAPPENED_KEY, NOOP_ACTION_ID
from executor.errors import ModelError, UnknownDependency
from protocol.messages import Descriptor
from speclang.elaborate import elaborate_expression
from speclang.expr import Expr, Lit, evaluate, fields_of
from speclang.parser import parse_expression
from speclang.values import State, is_number, is_value
from utils.errors import StromError
from utils.io import load_json

logger = logging.getLogger(__name__)

TRUE = Lit(True)


@dataclass(frozen=True)
class ModelAction:
    label: str
    guard: Expr = TRUE
    effects: Mapping[str, Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class ModelEvent:
    id: str
    subject: Optional[str] = None
    enabled: Expr = TRUE
    period: Optional[int] = None
    trigger: Optional[str] = None
    delay: int = 0
    effects: Mapping[str, Expr] = field(default_factory=dict)

    @property
    def descriptor(self) -> Descriptor:
        if self.subject is None:
            return Descriptor(self.id)
        return Descriptor(CHANGED_EVENT_ID, (self.subject,))


@dataclass(frozen=True)
class Model:
    state: Mapping[str, Any]
    actions: Mapping[str, ModelAction]
    events: List[ModelEvent]
    loaded_delay: int = 0

    def apply(self, fields: Dict[str, Any], effects: Mapping[str, Expr]) -> Dict[str, Any]:
        """
        Evaluates every effect against the same pre-state, then writes them
        all at once.
        """
        before = State(fields)
        updates = {name: evaluate(expr, before) for name, expr in effects.items()}
        after = dict(fields)
        after.update(updates)

        return after

    def enabled(self, guard: Expr, fields: Dict[str, Any]) -> bool:
        return evaluate(guard, State(fields)) is True


def _expression(source: Any, path: str, declared: Iterable[str]) -> Expr:
    if not isinstance(source, str):
        raise ModelError(path, "expressions are written as strings")
    try:
        expr = elaborate_expression(parse_expression(source))
    except StromError as e:
        raise ModelError(path, e.message) from e
    unknown = fields_of(expr) - set(declared)
    if unknown:
        raise ModelError(path, f"reads undeclared field(s) {', '.join(sorted(unknown))}")

    return expr


def _effects(raw: Any, path: str, declared: Iterable[str]) -> Dict[str, Expr]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ModelError(path, "effects must map field names to expressions")
    effects: Dict[str, Expr] = {}
    for name, source in raw.items():
        if name not in declared:
            raise ModelError(f"{path}.{name}", "effect writes an undeclared field")
        effects[name] = _expression(source, f"{path}.{name}", declared)

    return effects


def _non_negative_int(raw: Any, path: str, positive: bool = False) -> int:
    if isinstance(raw, bool) or not is_number(raw) or raw != int(raw) or raw < (1 if positive else 0):
        raise ModelError(path, f"expected a {'positive' if positive else 'non-negative'} integer")

    return int(raw)


def _parse_action(label: str, raw: Any, declared: List[str]) -> ModelAction:
    path = f"actions.{label}"
    if not isinstance(raw, dict):
        raise ModelError(path, "an action is an object with 'guard' and 'effects'")
    guard = _expression(raw.get("guard", "true"), f"{path}.guard", declared)

    return ModelAction(label, guard, _effects(raw.get("effects"), f"{path}.effects", declared))


def _parse_event(index: int, raw: Any, declared: List[str], action_labels: Iterable[str]) -> ModelEvent:
    path = f"events[{index}]"
    if not isinstance(raw, dict):
        raise ModelError(path, "an event is an object")
    event_id = raw.get("id")
    if not isinstance(event_id, str) or not event_id:
        raise ModelError(f"{path}.id", "events need a non-empty id")
    subject = raw.get("subject")
    if subject is not None and subject not in declared:
        raise ModelError(f"{path}.subject", f"undeclared field '{subject}'")
    schedule = raw.get("schedule")
    if not isinstance(schedule, dict) or len(schedule) != 1:
        raise ModelError(f"{path}.schedule", "give exactly one of 'periodic' or 'afterAction'")
    period = None
    trigger = None
    delay = 0
    if "periodic" in schedule:
        period = _non_negative_int(schedule["periodic"], f"{path}.schedule.periodic", positive=True)
    elif "afterAction" in schedule:
        after = schedule["afterAction"]
        if not isinstance(after, dict):
            raise ModelError(f"{path}.schedule.afterAction", "expected an object with 'trigger' and 'delay'")
        trigger = after.get("trigger")
        if trigger not in action_labels:
            raise ModelError(f"{path}.schedule.afterAction.trigger", f"unknown action '{trigger}'")
        delay = _non_negative_int(after.get("delay", 0), f"{path}.schedule.afterAction.delay")
    else:
        raise ModelError(f"{path}.schedule", f"unknown schedule kind '{next(iter(schedule))}'")

    return ModelEvent(
        event_id,
        subject,
        _expression(raw.get("enabled", "true"), f"{path}.enabled", declared),
        period,
        trigger,
        delay,
        _effects(raw.get("effects"), f"{path}.effects", declared),
    )


def load_model(path: str) -> Model:
    try:
        document = load_json(path)
    except ValueError as e:
        raise ModelError("", f"{path} is not valid JSON: {e}") from e

    return parse_model(document)


def parse_model(document: Any) -> Model:
    if not isinstance(document, dict):
        raise ModelError("", "a model is a JSON object")
    state = document.get("state")
    if not isinstance(state, dict):
        raise ModelError("state", "expected an object of field values")
    for name, value in state.items():
        if name == HAPPENED_KEY:
            raise ModelError(f"state.{name}", "reserved field name")
        if not is_value(value):
            raise ModelError(f"state.{name}", "not a JSON value")
    declared = list(state)

    raw_actions = document.get("actions", {})
    if not isinstance(raw_actions, dict):
        raise ModelError("actions", "expected an object keyed by descriptor label")
    actions = {label: _parse_action(label, raw, declared) for label, raw in raw_actions.items()}
    actions.setdefault(NOOP_ACTION_ID, ModelAction(NOOP_ACTION_ID))

    raw_events = document.get("events", [])
    if not isinstance(raw_events, list):
        raise ModelError("events", "expected a list")
    events = [_parse_event(index, raw, declared, actions) for index, raw in enumerate(raw_events)]
    loaded_delay = _non_negative_int(document.get("loadedDelay", 0), "loadedDelay")
    logger.debug("Model with %d field(s), %d action(s), %d event(s)", len(declared), len(actions), len(events))

    return Model(copy.deepcopy(state), actions, events, loaded_delay)


def snapshot(fields: Mapping[str, Any], dependencies: Iterable[str], happened: Iterable[str] = ()) -> State:
    """
    Copies exactly the requested fields out of the model state.
    """
    selected: Dict[str, Any] = {}
    for name in dependencies:
        if name not in fields:
            raise UnknownDependency(name)
        selected[name] = copy.deepcopy(fields[name])

    return State(selected, tuple(happened))
