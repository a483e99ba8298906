from typing import Optional


class StromError(Exception):
    """
    Root of every error raised by the checker, the executor and the
    specification toolchain. `state_index` is filled in when the error was
    raised while evaluating a particular trace position.
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
        self.state_index: Optional[int] = None

    def __str__(self) -> str:
        if self.state_index is None:
            return self.message
        return f"{self.message} (at state {self.state_index})"
