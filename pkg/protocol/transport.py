"""
Connections carry protocol messages between the checker and an executor.
All of them expose `send`, `receive` and `close`; `receive` returns None
when nothing arrives within the timeout.
"""

import collections
import logging
import queue
import shlex
import socket
import subprocess
import threading
from typing import Deque, List, Optional, Protocol, TextIO

from protocol.codec import decode, encode
from protocol.errors import ConnectionClosed
from protocol.messages import CheckerMessage, ExecutorMessage

logger = logging.getLogger(__name__)

_CLOSED = object()


class Peer(Protocol):
    def handle(self, msg: CheckerMessage) -> List[ExecutorMessage]:
        ...

    def advance(self) -> List[ExecutorMessage]:
        ...


class Connection(Protocol):
    def send(self, msg: CheckerMessage) -> None:
        ...

    def receive(self, timeout: Optional[float] = None) -> Optional[ExecutorMessage]:
        ...

    def close(self) -> None:
        ...


class InProcessConnection:
    """
    Links the checker directly to an executor session in the same process.
    Messages still go through the wire encoding in both directions.
    """

    def __init__(self, peer: Peer):
        self.peer = peer
        self.inbox: Deque[str] = collections.deque()
        self.closed = False

    def close(self) -> None:
        self.closed = True

    def deliver(self, messages: List[ExecutorMessage]) -> None:
        self.inbox.extend(encode(msg) for msg in messages)

    def receive(self, timeout: Optional[float] = None) -> Optional[ExecutorMessage]:
        if not self.inbox:
            self.deliver(self.peer.advance())
        if not self.inbox:
            return None

        return decode(self.inbox.popleft())

    def send(self, msg: CheckerMessage) -> None:
        if self.closed:
            raise ConnectionClosed("connection already closed")
        self.deliver(self.peer.handle(decode(encode(msg))))


class _StreamConnection:
    """
    Shared plumbing for line-oriented connections: a daemon thread reads
    lines and queues decoded messages for `receive`.
    """

    def __init__(self, reader: TextIO, writer: TextIO, name: str):
        self.writer = writer
        self.inbox: "queue.Queue[object]" = queue.Queue()
        self.thread = threading.Thread(target=self._read_loop, args=(reader,), name=name, daemon=True)
        self.thread.start()

    def _read_loop(self, reader: TextIO) -> None:
        try:
            for line in reader:
                if line.strip():
                    self.inbox.put(line)
        except (OSError, ValueError) as e:
            logger.debug("Reader stopped: %s", e)
        finally:
            self.inbox.put(_CLOSED)

    def receive(self, timeout: Optional[float] = None) -> Optional[ExecutorMessage]:
        try:
            item = self.inbox.get(timeout=timeout)
        except queue.Empty:
            return None
        if item is _CLOSED:
            self.inbox.put(_CLOSED)
            raise ConnectionClosed("executor closed the connection")

        return decode(item)

    def send(self, msg: CheckerMessage) -> None:
        try:
            self.writer.write(encode(msg) + "\n")
            self.writer.flush()
        except (OSError, ValueError) as e:
            raise ConnectionClosed(f"cannot write to executor: {e}") from e


class SubprocessConnection(_StreamConnection):
    """An executor launched as a child process speaking on its standard streams."""

    def __init__(self, command: str):
        self.process = subprocess.Popen(
            shlex.split(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        logger.debug("Started executor process %d: %s", self.process.pid, command)
        super().__init__(self.process.stdout, self.process.stdin, "executor-stdout")

    def close(self) -> None:
        try:
            self.process.stdin.close()
        except OSError:
            pass
        try:
            self.process.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.process.kill()
            self.process.wait()


class TcpConnection(_StreamConnection):
    def __init__(self, host: str, port: int):
        self.sock = socket.create_connection((host, port))
        self.reader = self.sock.makefile("r", encoding="utf-8", newline="\n")
        self.writer_file = self.sock.makefile("w", encoding="utf-8", newline="\n")
        logger.debug("Connected to executor at %s:%d", host, port)
        super().__init__(self.reader, self.writer_file, "executor-tcp")

    def close(self) -> None:
        try:
            self.writer_file.close()
            self.sock.shutdown(socket.SHUT_RDWR)
            self.sock.close()
        except OSError:
            pass
