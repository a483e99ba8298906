from dataclasses import dataclass, field
from typing import Any, Mapping, Tuple, Union

Value = Union[None, bool, int, float, str, list, dict]


@dataclass(frozen=True)
class State:
    """
    Snapshot of the system under test: selector fields (keyed
    `selector.field`) and the descriptor ids that produced the snapshot.
    """

    fields: Mapping[str, Any] = field(default_factory=dict)
    happened: Tuple[str, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self.happened == other.happened and fields_equal(
            self.fields, other.fields
        )


def fields_equal(left: Mapping[str, Any], right: Mapping[str, Any]) -> bool:
    if set(left.keys()) != set(right.keys()):
        return False

    return all(values_equal(left[key], right[key]) for key in left)


def is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def is_value(value: Any) -> bool:
    if value is None or isinstance(value, (bool, str)) or is_number(value):
        return True
    if isinstance(value, (list, tuple)):
        return all(is_value(item) for item in value)
    if isinstance(value, dict):
        return all(isinstance(k, str) and is_value(v) for k, v in value.items())

    return False


def type_name(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if is_number(value):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, (list, tuple)):
        return "sequence"
    if isinstance(value, dict):
        return "map"

    return type(value).__name__


def values_equal(left: Any, right: Any) -> bool:
    """
    Deep structural equality. Numbers compare numerically, but booleans are
    never equal to numbers.
    """
    if isinstance(left, bool) or isinstance(right, bool):
        return isinstance(left, bool) and isinstance(right, bool) and left == right
    if is_number(left) and is_number(right):
        return left == right
    if isinstance(left, (list, tuple)) and isinstance(right, (list, tuple)):
        return len(left) == len(right) and all(
            values_equal(a, b) for a, b in zip(left, right)
        )
    if isinstance(left, dict) and isinstance(right, dict):
        return fields_equal(left, right)

    return type(left) is type(right) and left == right
