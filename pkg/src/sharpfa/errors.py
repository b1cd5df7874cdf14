"""Exception types and size limits shared by all constructions."""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


class FAError(Exception):
    """Base class for errors raised by this package."""


class InputError(FAError, ValueError):
    """Malformed input: unknown symbol, bad parameter, unparsable file."""


class ContractError(FAError, ValueError):
    """A precondition of a construction was violated by the caller."""


class ResourceLimitError(FAError, RuntimeError):
    """A configured budget (oracle size, state count, binomial order) was exceeded."""


@dataclass(frozen=True)
class Limits:
    oracle_budget: int = 10**7
    max_states: int = 200_000
    max_binom: int = 6
    const_bound: int = 8


_limits: contextvars.ContextVar[Limits] = contextvars.ContextVar("sharpfa_limits", default=Limits())


def current_limits() -> Limits:
    return _limits.get()


@contextlib.contextmanager
def using_limits(limits: Limits | None = None, **changes):
    """Temporarily override the active limits, e.g. ``using_limits(max_states=10_000)``."""
    new = replace(limits or _limits.get(), **changes)
    token = _limits.set(new)
    try:
        yield new
    finally:
        _limits.reset(token)
