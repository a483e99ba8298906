from utils.errors import StromError


class ExecutorDied(StromError):
    """The executor stopped answering or closed the connection."""


class ProtocolViolation(StromError):
    """The executor sent a message that does not fit the session."""


class StuckNoEnabledActions(StromError):
    def __init__(self, waits: int):
        super().__init__(f"no enabled actions and no state change after {waits} waits")
        self.waits = waits


class GuardEvalError(StromError):
    def __init__(self, action: str, cause: Exception):
        super().__init__(f"guard of {action} failed: {cause}")
        self.action = action
        self.cause = cause
