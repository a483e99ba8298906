from utils.errors import StromError


class ModelError(StromError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"invalid model at '{path}': {reason}")
        self.path = path
        self.reason = reason


class UnknownDependency(StromError):
    def __init__(self, name: str):
        super().__init__(f"the model has no field '{name}'")
        self.name = name


class ProtocolViolation(StromError):
    """The checker sent a message the executor cannot accept in its current state."""
