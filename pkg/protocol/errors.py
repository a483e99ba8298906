from typing import Optional

from utils.errors import StromError


class DecodeError(StromError):
    """
    `offset` points into the line at the broken JSON or at the offending
    key. `line` is set when decoding a multi-line transcript.
    """

    def __init__(self, offset: int, reason: str, key: Optional[str] = None, line: Optional[int] = None):
        where = f"line {line}, offset {offset}" if line is not None else f"offset {offset}"
        super().__init__(f"cannot decode message at {where}: {reason}")
        self.offset = offset
        self.reason = reason
        self.key = key
        self.line = line


class ConnectionClosed(StromError):
    """The peer closed its end of the connection."""
