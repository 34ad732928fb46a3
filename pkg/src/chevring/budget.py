"""Enumeration budget shared by every exhaustive routine."""

from __future__ import annotations

import os

ENV_VAR = "CHEVRING_BUDGET"
DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} items exceeds budget {cap}")
        self.what = what
        self.size = size
        self.cap = cap


_override: int | None = None


def current_budget() -> int:
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


def set_budget(cap: int | None) -> None:
    global _override
    _override = cap


def require(what: str, size: int, cap: int | None = None) -> None:
    cap = current_budget() if cap is None else cap
    if size > cap:
        raise BudgetExceeded(what, size, cap)
