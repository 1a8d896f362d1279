"""
Stage timing for gazeforge runs.

Each CLI stage (loading assets, augmenting, planning, scoring) is wrapped
in an ``OperationTimer``. The monitor keeps the last record per stage and
its summary is attached to every ``--json`` report.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from utils.logging import get_logger


@dataclass
class PerformanceMetrics:
    """One timed stage."""

    operation_name: str
    duration: float
    success: bool = True
    items: Optional[int] = None
    error_message: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def throughput(self) -> Optional[float]:
        """Items per second, when the stage declared an item count."""
        if self.items is None or self.duration <= 0:
            return None
        return self.items / self.duration


class PerformanceMonitor:
    """Collects stage records for the current run."""

    def __init__(self) -> None:
        self.logger = get_logger("performance")
        self.metrics: Dict[str, PerformanceMetrics] = {}

    def record_metric(
        self,
        operation_name: str,
        duration: float,
        success: bool = True,
        error_message: Optional[str] = None,
        metadata: Optional[Dict[str, Any]] = None,
        items: Optional[int] = None,
    ) -> PerformanceMetrics:
        record = PerformanceMetrics(
            operation_name=operation_name,
            duration=duration,
            success=success,
            items=items,
            error_message=error_message,
            metadata=dict(metadata or {}),
        )
        self.metrics[operation_name] = record
        if not success:
            self.logger.error(f"Stage '{operation_name}' failed after {duration:.3f}s: {error_message}")
        elif record.throughput is not None:
            self.logger.debug(
                f"Stage '{operation_name}': {items} items in {duration:.3f}s "
                f"({record.throughput:.1f}/s)"
            )
        else:
            self.logger.debug(f"Stage '{operation_name}' took {duration:.3f}s")
        return record

    def get_summary(self) -> Dict[str, Any]:
        """Per-stage seconds plus totals; stable key order for JSON output."""
        if not self.metrics:
            return {"total_operations": 0}
        summary: Dict[str, Any] = {
            "total_operations": len(self.metrics),
            "failed_operations": sum(1 for m in self.metrics.values() if not m.success),
            "operations": {name: round(m.duration, 6) for name, m in self.metrics.items()},
            "total_duration": round(sum(m.duration for m in self.metrics.values()), 6),
        }
        rates = {
            name: round(m.throughput, 3)
            for name, m in self.metrics.items()
            if m.throughput is not None
        }
        if rates:
            summary["items_per_second"] = rates
        return summary

    def clear_metrics(self) -> None:
        self.metrics.clear()


_performance_monitor: Optional[PerformanceMonitor] = None


def get_performance_monitor() -> PerformanceMonitor:
    """Process-wide monitor."""
    global _performance_monitor
    if _performance_monitor is None:
        _performance_monitor = PerformanceMonitor()
    return _performance_monitor


class OperationTimer:
    """Times a ``with`` block as one stage.

    Set ``timer.items`` inside the block (or pass ``items``) to report
    throughput. Exceptions are recorded and propagate.
    """

    def __init__(
        self,
        operation_name: str,
        metadata: Optional[Dict[str, Any]] = None,
        items: Optional[int] = None,
    ):
        self.operation_name = operation_name
        self.metadata = metadata
        self.items = items
        self.monitor = get_performance_monitor()
        self.start_time: Optional[float] = None

    def __enter__(self) -> "OperationTimer":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self.start_time is None:
            return
        self.monitor.record_metric(
            operation_name=self.operation_name,
            duration=time.perf_counter() - self.start_time,
            success=exc_type is None,
            error_message=str(exc_val) if exc_val else None,
            metadata=self.metadata,
            items=self.items,
        )
