"""Performance Monitor - per-stage wall-clock timings and process resource snapshots."""

import logging
import os
import time
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterator, List

logger = logging.getLogger(__name__)

try:
    import psutil
    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False
    logger.warning("psutil not available - resource snapshots limited to os.cpu_count")

HISTORY_LIMIT = 1000


def resource_snapshot() -> Dict[str, Any]:
    """CPU count and resident memory of the current process."""
    snapshot: Dict[str, Any] = {"timestamp": datetime.now().isoformat()}
    if PSUTIL_AVAILABLE:
        process = psutil.Process(os.getpid())
        snapshot.update({
            "cpu_count_logical": psutil.cpu_count(logical=True),
            "cpu_count_physical": psutil.cpu_count(logical=False),
            "rss_mb": round(process.memory_info().rss / (1024 * 1024), 2),
            "memory_percent": psutil.virtual_memory().percent,
        })
    else:
        snapshot["cpu_count_logical"] = os.cpu_count()
    return snapshot


def default_worker_count() -> int:
    """Physical cores when psutil can tell, else logical cores."""
    count = None
    if PSUTIL_AVAILABLE:
        count = psutil.cpu_count(logical=False)
    return max(1, count or os.cpu_count() or 1)


class PerformanceMonitor:
    """Records wall-clock durations of named pipeline stages."""

    def __init__(self):
        self.timings: Dict[str, float] = {}
        self.metrics_history: List[Dict[str, Any]] = []

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.timings[name] = self.timings.get(name, 0.0) + elapsed
            self.record_metrics({"stage": name, "seconds": elapsed})
            logger.debug(f"Stage '{name}' took {elapsed:.4f}s")

    def record_metrics(self, metrics: Dict[str, Any]) -> None:
        self.metrics_history.append({"timestamp": datetime.now().isoformat(), **metrics})
        if len(self.metrics_history) > HISTORY_LIMIT:
            self.metrics_history = self.metrics_history[-HISTORY_LIMIT:]

    def get_timings(self) -> Dict[str, float]:
        return dict(self.timings)

    def total(self) -> float:
        return float(sum(self.timings.values()))

    def get_history(self, limit: int = 100) -> List[Dict[str, Any]]:
        return self.metrics_history[-limit:]

    def summary(self) -> Dict[str, Any]:
        return {
            "timings": self.get_timings(),
            "total_seconds": self.total(),
            "resources": resource_snapshot(),
        }
