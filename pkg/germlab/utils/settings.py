"""Numeric thresholds and environment settings."""

import os
import sys
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by floating-mode decisions.

    Exact-mode computations ignore everything here except the Newton and sweep
    settings, which are always numeric.
    """

    zero: float = 1e-9
    kernel: float = 1e-8
    rank: float = 1e-8
    rank_guard: float = 1e-10
    newton: float = 1e-12
    newton_accept: float = 1e-8
    newton_iterations: int = 40
    dedupe: float = 1e-6
    bisection: float = 1e-10
    root_cluster: float = 1e-4
    form_zero: float = 1e-7

    def with_overrides(self, **kwargs):
        """Return a copy with the given fields replaced, ignoring None values."""
        changes = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **changes) if changes else self


DEFAULT_TOLERANCES = Tolerances()


def thread_count(default=None):
    """Number of worker threads allowed by GERMLAB_THREADS."""
    fallback = default or min(8, os.cpu_count() or 1)
    raw = os.environ.get("GERMLAB_THREADS")
    if raw is None or raw.strip() == "":
        return fallback
    try:
        value = int(raw)
    except ValueError:
        print(f"Ignoring GERMLAB_THREADS={raw!r}: not an integer", file=sys.stderr)
        return 1
    if value < 1:
        print(f"Ignoring GERMLAB_THREADS={raw!r}: must be positive", file=sys.stderr)
        return 1
    return value
