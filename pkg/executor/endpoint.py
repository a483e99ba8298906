"""
Executor endpoints as written on the command line:

    model:PATH          the bundled model executor, in process
    cmd:COMMAND         an external executor on its standard streams
    tcp:HOST:PORT       an external executor listening on a socket
"""

from dataclasses import dataclass
from typing import Callable, Optional

from constants.file import EXECUTOR_COMMAND_PREFIX, EXECUTOR_MODEL_PREFIX, EXECUTOR_TCP_PREFIX
from executor.model import Model, load_model
from executor.session import ModelSession
from protocol.transport import Connection, InProcessConnection, SubprocessConnection, TcpConnection
from utils.errors import StromError

MODEL = "model"
COMMAND = "command"
TCP = "tcp"


class EndpointError(StromError):
    pass


@dataclass(frozen=True)
class Endpoint:
    kind: str
    target: str
    port: Optional[int] = None


def parse_endpoint(text: str) -> Endpoint:
    if text.startswith(EXECUTOR_MODEL_PREFIX):
        path = text[len(EXECUTOR_MODEL_PREFIX):]
        if not path:
            raise EndpointError("model: needs a model file path")
        return Endpoint(MODEL, path)
    if text.startswith(EXECUTOR_COMMAND_PREFIX):
        command = text[len(EXECUTOR_COMMAND_PREFIX):].strip()
        if not command:
            raise EndpointError("cmd: needs a command line")
        return Endpoint(COMMAND, command)
    if text.startswith(EXECUTOR_TCP_PREFIX):
        host, sep, port = text[len(EXECUTOR_TCP_PREFIX):].rpartition(":")
        if not sep or not host or not port.isdigit():
            raise EndpointError(f"expected tcp:HOST:PORT, got '{text}'")
        return Endpoint(TCP, host, int(port))
    raise EndpointError(
        f"unknown executor '{text}', expected one of "
        f"{EXECUTOR_MODEL_PREFIX}, {EXECUTOR_COMMAND_PREFIX}, {EXECUTOR_TCP_PREFIX}"
    )


def model_connector(model: Model, realtime: bool = False) -> Callable[[], Connection]:
    def _connect() -> Connection:
        return InProcessConnection(ModelSession(model, auto_advance=True, realtime=realtime))

    return _connect


def connector(endpoint: Endpoint, realtime: bool = False) -> Callable[[], Connection]:
    """
    Returns a factory giving a fresh, isolated executor connection per run.
    Model files are loaded once, up front, so errors surface before any run.
    """
    if endpoint.kind == MODEL:
        return model_connector(load_model(endpoint.target), realtime)
    if endpoint.kind == COMMAND:
        return lambda: SubprocessConnection(endpoint.target)

    return lambda: TcpConnection(endpoint.target, endpoint.port)
