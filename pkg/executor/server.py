"""
Runs the model executor as a separate process: over standard streams, or
as a TCP server with one fresh session per connection.
"""

import io
import logging
import socketserver
from typing import TextIO

from executor.model import Model
from executor.session import ModelSession
from protocol.codec import decode, encode
from protocol.messages import End
from utils.errors import StromError

logger = logging.getLogger(__name__)


def serve_stream(model: Model, reader: TextIO, writer: TextIO, realtime: bool = False) -> int:
    """
    Serves one session until End or end of input. Returns the number of
    messages handled.
    """
    session = ModelSession(model, realtime=realtime)
    handled = 0
    for line in reader:
        if not line.strip():
            continue
        try:
            msg = decode(line)
            replies = session.handle(msg)
        except StromError as e:
            logger.error("Executor session aborted: %s", e)
            break
        handled += 1
        for reply in replies:
            writer.write(encode(reply) + "\n")
        writer.flush()
        if isinstance(msg, End):
            break

    return handled


def serve_tcp(model: Model, host: str, port: int, realtime: bool = False) -> None:
    class _Handler(socketserver.StreamRequestHandler):
        def handle(self) -> None:
            logger.info("Executor session from %s:%d", *self.client_address[:2])
            reader = io.TextIOWrapper(self.rfile, encoding="utf-8", newline="\n")
            writer = io.TextIOWrapper(self.wfile, encoding="utf-8", newline="\n", write_through=True)
            try:
                serve_stream(model, reader, writer, realtime)
            finally:
                reader.detach()
                writer.detach()

    with socketserver.ThreadingTCPServer((host, port), _Handler) as server:
        logger.info("Model executor listening on %s:%d", host, port)
        server.serve_forever()
