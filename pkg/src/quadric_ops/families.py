"""Lazily built, thread-safe cache of per-order radial families."""
from __future__ import annotations

import threading
from typing import Callable

from .poly1d import RecurrenceCoefficients, Weight1D, family_recurrence


class RadialFamilies:
    """Recurrences for the reduced weights ``reduced(m)``, built on demand.

    Requests for a longer recurrence than cached trigger a rebuild; shorter
    requests are served by truncation.  Construction is serialised by a lock
    so concurrent evaluation after (or during) warm-up is race-free.
    """

    def __init__(self, reduced: Callable[[int], Weight1D], tol: float = 1e-12):
        self._reduced = reduced
        self._tol = tol
        self._cache: dict[int, RecurrenceCoefficients] = {}
        self._weights: dict[int, Weight1D] = {}
        self._lock = threading.Lock()

    def weight(self, m: int) -> Weight1D:
        with self._lock:
            w = self._weights.get(m)
            if w is None:
                w = self._reduced(m)
                self._weights[m] = w
        return w

    def get(self, m: int, length: int) -> RecurrenceCoefficients:
        w = self.weight(m)
        with self._lock:
            rc = self._cache.get(m)
            if rc is None or rc.length < length:
                rc = family_recurrence(w, max(length, 4), tol=self._tol)
                self._cache[m] = rc
        return rc

    def kind(self, m: int) -> str:
        return self.weight(m).classify()[0]
