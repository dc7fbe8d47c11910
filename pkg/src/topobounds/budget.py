"""Cooperative cancellation for long searches."""

from __future__ import annotations

import time

from .errors import Timeout


class Deadline:
    """Wall-clock deadline polled by search loops.

    ``Deadline(None)`` never expires. Checks are cheap: the clock is read
    only every ``stride`` calls.
    """

    def __init__(self, seconds: float | None = None, stride: int = 1024):
        self.seconds = seconds
        self._end = None if seconds is None else time.monotonic() + seconds
        self._stride = stride
        self._count = 0

    def check(self) -> None:
        if self._end is None:
            return
        self._count += 1
        if self._count % self._stride:
            return
        if time.monotonic() > self._end:
            raise Timeout(f"time budget of {self.seconds}s exceeded")


NO_DEADLINE = Deadline(None)


def as_deadline(deadline: Deadline | float | None) -> Deadline:
    if isinstance(deadline, Deadline):
        return deadline
    return Deadline(deadline)
