from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from enum import Enum


class Phase(str, Enum):
    PREPROCESS = "preprocess"
    UPDATE = "update"
    QUERY = "query"


class OpCounters:
    """Monotone per-phase counts of small-structure work.

    Categories are free-form strings (``bfs_step``, ``memo_lookup``, ``memo_hit``,
    ``color_read``, ``compose``, ``combine``). Preprocessing is tracked but excluded from
    :meth:`snapshot` totals used for n-independence checks.
    """

    def __init__(self):
        self._counts: dict[Phase, Counter[str]] = {phase: Counter() for phase in Phase}
        self._phase = Phase.PREPROCESS

    @property
    def phase(self) -> Phase:
        return self._phase

    @contextmanager
    def running(self, phase: Phase):
        previous, self._phase = self._phase, phase
        try:
            yield self
        finally:
            self._phase = previous

    def charge(self, category: str, amount: int = 1) -> None:
        self._counts[self._phase][category] += amount

    def total(self, phase: Phase) -> int:
        return sum(self._counts[phase].values())

    def get(self, phase: Phase, category: str) -> int:
        return self._counts[phase][category]

    def snapshot(self) -> dict[str, dict[str, int]]:
        return {
            phase.value: dict(sorted(self._counts[phase].items())) for phase in (Phase.UPDATE, Phase.QUERY)
        }
