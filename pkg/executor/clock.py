"""
Logical clock: a priority queue of pending items keyed by fire time, with
FIFO order among items due at the same time.
"""

import heapq
import itertools
from typing import Any, List, Optional, Set, Tuple


class LogicalClock:
    def __init__(self):
        self.now = 0
        self.pending: List[Tuple[int, int, Any]] = []
        self.cancelled: Set[int] = set()
        self.sequence = itertools.count()

    def __len__(self) -> int:
        return len(self.pending) - len(self.cancelled)

    def _drop_cancelled(self) -> None:
        while self.pending and self.pending[0][1] in self.cancelled:
            _, handle, _ = heapq.heappop(self.pending)
            self.cancelled.discard(handle)

    def cancel(self, handle: int) -> None:
        if any(entry[1] == handle for entry in self.pending):
            self.cancelled.add(handle)

    def peek_time(self) -> Optional[int]:
        self._drop_cancelled()
        if not self.pending:
            return None

        return self.pending[0][0]

    def pop(self) -> Tuple[int, Any]:
        """
        Removes the earliest pending item and moves the clock to its fire
        time.
        """
        self._drop_cancelled()
        if not self.pending:
            raise IndexError("no pending items")
        fire_time, _, item = heapq.heappop(self.pending)
        self.now = fire_time

        return fire_time, item

    def schedule(self, delay: int, item: Any) -> int:
        if delay < 0:
            raise ValueError(f"cannot schedule {delay} ms into the past")
        handle = next(self.sequence)
        heapq.heappush(self.pending, (self.now + delay, handle, item))

        return handle
