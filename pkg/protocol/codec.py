"""
Newline-delimited JSON encoding of protocol messages. One message per line,
compact separators, a `tag` key first.
"""

import json
from typing import Any, Dict, List, Optional

from constants.protocol import (
    HAPPENED_KEY,
    TAG_ACT,
    TAG_ACTED,
    TAG_END,
    TAG_EVENT,
    TAG_STALE,
    TAG_START,
    TAG_TIMEOUT,
    TAG_WAIT,
)
from protocol.errors import DecodeError
from protocol.messages import Act, Acted, Descriptor, End, Event, Message, Stale, Start, Timeout, Wait
from speclang.values import State


class _Invalid(Exception):
    def __init__(self, key: Optional[str], reason: str):
        super().__init__(reason)
        self.key = key
        self.reason = reason


def _key_offset(line: str, key: Optional[str]) -> int:
    """Offset of the deepest part of a dotted key path found in the line."""
    offset = 0
    for part in key.split(".") if key else []:
        found = line.find(json.dumps(part), offset)
        if found < 0:
            break
        offset = found

    return offset


def _descriptor(data: Any, key: str) -> Descriptor:
    if not isinstance(data, dict):
        raise _Invalid(key, f"'{key}' must be an object")
    descriptor_id = data.get("id")
    if not isinstance(descriptor_id, str) or not descriptor_id:
        raise _Invalid(f"{key}.id", f"'{key}.id' must be a non-empty string")
    args = data.get("args", [])
    if not isinstance(args, list):
        raise _Invalid(f"{key}.args", f"'{key}.args' must be a list")

    return Descriptor(descriptor_id, tuple(args))


def _encode_descriptor(descriptor: Descriptor) -> Dict[str, Any]:
    return {"id": descriptor.id, "args": list(descriptor.args)}


def _encode_state(state: State) -> Dict[str, Any]:
    encoded = dict(state.fields)
    encoded[HAPPENED_KEY] = list(state.happened)

    return encoded


def _non_negative_int(data: Dict[str, Any], key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise _Invalid(key, f"'{key}' must be a non-negative integer")

    return value


def _state(data: Dict[str, Any]) -> State:
    raw = data.get("state")
    if not isinstance(raw, dict):
        raise _Invalid("state", "'state' must be an object")
    fields = dict(raw)
    happened = fields.pop(HAPPENED_KEY, [])
    if not isinstance(happened, list) or not all(isinstance(item, str) for item in happened):
        raise _Invalid(f"state.{HAPPENED_KEY}", f"'state.{HAPPENED_KEY}' must be a list of strings")

    return State(fields, tuple(happened))


def _message(data: Dict[str, Any]) -> Message:
    tag = data.get("tag")
    if tag == TAG_START:
        dependencies = data.get("dependencies")
        if not isinstance(dependencies, list) or not all(isinstance(d, str) for d in dependencies):
            raise _Invalid("dependencies", "'dependencies' must be a list of strings")
        return Start(tuple(dependencies))
    if tag == TAG_ACT:
        timeout = data.get("timeout")
        if timeout is not None:
            timeout = _non_negative_int(data, "timeout")
        return Act(_descriptor(data.get("action"), "action"), _non_negative_int(data, "version"), timeout)
    if tag == TAG_WAIT:
        return Wait(_non_negative_int(data, "time"), _non_negative_int(data, "version"))
    if tag == TAG_END:
        return End()
    if tag == TAG_EVENT:
        return Event(_descriptor(data.get("event"), "event"), _state(data), _non_negative_int(data, "version"))
    if tag == TAG_ACTED:
        return Acted(_state(data), _non_negative_int(data, "version"))
    if tag == TAG_TIMEOUT:
        return Timeout(_state(data), _non_negative_int(data, "version"))
    if tag == TAG_STALE:
        return Stale(_non_negative_int(data, "version"))

    raise _Invalid("tag", f"unknown tag {tag!r}")


def decode(line: str) -> Message:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise DecodeError(e.pos, e.msg) from e
    if not isinstance(data, dict):
        raise DecodeError(0, "a message must be a JSON object")
    try:
        return _message(data)
    except _Invalid as e:
        raise DecodeError(_key_offset(line, e.key), e.reason, e.key) from None


def decode_lines(text: str) -> List[Message]:
    messages = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            messages.append(decode(line))
        except DecodeError as e:
            raise DecodeError(e.offset, e.reason, e.key, number) from e

    return messages


def encode(msg: Message) -> str:
    data: Dict[str, Any]
    if isinstance(msg, Start):
        data = {"tag": TAG_START, "dependencies": list(msg.dependencies)}
    elif isinstance(msg, Act):
        data = {"tag": TAG_ACT, "action": _encode_descriptor(msg.action), "version": msg.version}
        if msg.timeout is not None:
            data["timeout"] = msg.timeout
    elif isinstance(msg, Wait):
        data = {"tag": TAG_WAIT, "time": msg.time, "version": msg.version}
    elif isinstance(msg, End):
        data = {"tag": TAG_END}
    elif isinstance(msg, Event):
        data = {
            "tag": TAG_EVENT,
            "event": _encode_descriptor(msg.event),
            "state": _encode_state(msg.state),
            "version": msg.version,
        }
    elif isinstance(msg, Acted):
        data = {"tag": TAG_ACTED, "state": _encode_state(msg.state), "version": msg.version}
    elif isinstance(msg, Timeout):
        data = {"tag": TAG_TIMEOUT, "state": _encode_state(msg.state), "version": msg.version}
    elif isinstance(msg, Stale):
        data = {"tag": TAG_STALE, "version": msg.version}
    else:
        raise TypeError(f"not a protocol message: {msg!r}")

    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)
