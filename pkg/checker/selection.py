import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from checker.errors import GuardEvalError
from constants.defaults import DEFAULT_POLL_MS
from speclang.elaborate import ActionSpec
from speclang.expr import evaluate
from speclang.values import State, type_name
from utils.errors import StromError


@dataclass(frozen=True)
class ActDecision:
    action: ActionSpec


@dataclass(frozen=True)
class WaitDecision:
    time: int


Decision = Union[ActDecision, WaitDecision]


def is_enabled(action: ActionSpec, state: State) -> bool:
    if action.guard is None:
        return True
    try:
        value = evaluate(action.guard, state)
    except StromError as e:
        raise GuardEvalError(action.name, e) from e
    if not isinstance(value, bool):
        raise GuardEvalError(action.name, TypeError(f"guard evaluated to a {type_name(value)}"))

    return value


def select_action(
    current: State,
    actions: Mapping[str, ActionSpec],
    allowed: Optional[Iterable[str]],
    rng: random.Random,
    poll_ms: int = DEFAULT_POLL_MS,
) -> Decision:
    """
    Picks uniformly among the enabled user actions. Events are never
    selected. With nothing enabled, asks to wait.
    """
    names = sorted(actions if allowed is None else set(allowed) & set(actions))
    enabled = [actions[name] for name in names if not actions[name].is_event and is_enabled(actions[name], current)]
    if not enabled:
        return WaitDecision(poll_ms)

    return ActDecision(rng.choice(enabled))
