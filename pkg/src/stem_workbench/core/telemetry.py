"""
Run Telemetry

Thread-safe counters and per-stage wall-clock timers. LLM-based
stemming is expensive, so every stage reports what it sent and how long
it took.
"""

import time
import threading
import logging
from collections import Counter
from contextlib import contextmanager
from typing import Dict, Iterator

logger = logging.getLogger(__name__)


class RunTelemetry:
    """Counters and stage timings collected during one run."""

    def __init__(self):
        self._lock = threading.Lock()
        self.counters: Counter = Counter()
        self.stage_seconds: Dict[str, float] = {}

    def incr(self, name: str, amount: int = 1) -> None:
        """Add ``amount`` to counter ``name``."""
        with self._lock:
            self.counters[name] += amount

    def get(self, name: str) -> int:
        with self._lock:
            return self.counters.get(name, 0)

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Time a named stage; repeated stages accumulate."""
        logger.info(f"Stage '{name}' started")
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            with self._lock:
                self.stage_seconds[name] = self.stage_seconds.get(name, 0.0) + elapsed
            logger.info(f"Stage '{name}' finished in {elapsed:.2f}s")

    def snapshot(self, prefix: str = "") -> Dict[str, int]:
        """Counters whose names start with ``prefix``, sorted by name."""
        with self._lock:
            return {k: v for k, v in sorted(self.counters.items()) if k.startswith(prefix)}

    def to_dict(self) -> Dict[str, Dict]:
        with self._lock:
            return {
                'counters': dict(sorted(self.counters.items())),
                'stage_seconds': {k: round(v, 3) for k, v in sorted(self.stage_seconds.items())},
            }
