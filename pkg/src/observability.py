# src/observability.py
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass

from config import LOG_LEVEL

# stderr only; stdout carries the JSON lines
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
    format="%(asctime)s | %(levelname)s | %(stage)s | %(message)s"
)


class _DefaultStage(logging.Filter):
    # records from third-party loggers carry no stage
    def filter(self, record):
        if not hasattr(record, "stage"):
            record.stage = "-"
        return True


for _handler in logging.getLogger().handlers:
    _handler.addFilter(_DefaultStage())

logger = logging.getLogger("qcalc")


def log(stage, level, message, **kwargs):
    """``log("verify", "debug", "sampling_stats", id="QGAUSS_STEP")`` -> "sampling_stats | id=QGAUSS_STEP"."""
    if kwargs:
        message = f"{message} | " + ", ".join(f"{k}={v}" for k, v in kwargs.items())
    getattr(logger, level)(message, extra={"stage": stage})


@contextmanager
def track_stage(stage_name):
    """Logs the wall time of the block, also when it raises."""
    started = time.perf_counter()
    try:
        yield
    finally:
        log(stage_name, "info", "stage_completed", duration_sec=round(time.perf_counter() - started, 3))


@dataclass
class Metrics:
    """Pass/fail counters for one identity sweep."""
    stage: str
    total: int = 0
    passed: int = 0
    failed: int = 0
    errored: int = 0

    def record(self, report):
        self.total += 1
        if report.passed:
            self.passed += 1
            return
        self.failed += 1
        # a reason means no residual was computed
        self.errored += bool(report.reason)

    def emit(self) -> dict:
        row = {"id": self.stage, "points": self.total, "passed": self.passed,
               "failed": self.failed, "errored": self.errored}
        log(self.stage, "info", "sweep_metrics", **{k: v for k, v in row.items() if k != "id"})
        return row
