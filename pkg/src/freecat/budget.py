"""Time and size limits for enumerations and searches."""

from __future__ import annotations

import contextlib
import os
import time
from contextvars import ContextVar
from typing import Optional

ENV_VAR = "FREECAT_BUDGET_MS"


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    def __init__(self, ms: Optional[float] = None):
        self.deadline = None if ms is None else time.monotonic() + ms / 1000.0
        self.ms = ms
        self._ticks = 0

    @classmethod
    def from_env(cls) -> "Budget":
        raw = os.environ.get(ENV_VAR)
        return cls(float(raw) if raw else None)

    def tick(self):
        if self.deadline is None:
            return
        self._ticks += 1
        if self._ticks & 0x3FF == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"time budget of {self.ms:g} ms exhausted")

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"time budget of {self.ms:g} ms exhausted")


_active: ContextVar[Budget] = ContextVar("freecat_budget", default=Budget())


def active() -> Budget:
    return _active.get()


@contextlib.contextmanager
def limited(budget: Budget):
    token = _active.set(budget)
    try:
        yield budget
    finally:
        _active.reset(token)
