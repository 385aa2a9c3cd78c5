"""Monitoring Package."""

from .performance_monitor import PerformanceMonitor, default_worker_count, resource_snapshot

__all__ = ["PerformanceMonitor", "default_worker_count", "resource_snapshot"]
