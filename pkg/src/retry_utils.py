# src/retry_utils.py
"""
Bounded rejection resampling on top of tenacity.

A draw that violates a hypothesis or a pole margin raises ``RejectedSample``;
``retry_call`` keeps drawing until one is accepted or the budget is spent.

Usage:
    from retry_utils import retry_call, RetryConfig

    sample = retry_call(draw_once, config=RetryConfig(max_retries=10000))
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Tuple, Type

from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt, wait_none

from config import MAX_REJECTIONS

logger = logging.getLogger(__name__)


class RejectedSample(Exception):
    """A parameter draw that must be thrown away."""


class RetriesExhausted(Exception):
    def __init__(self, attempts: int, last: Optional[BaseException]):
        super().__init__(f"gave up after {attempts} attempts: {last}")
        self.attempts = attempts
        self.last = last


@dataclass
class RetryConfig:
    """Resampling budget: ``max_retries`` rejections on top of the first draw."""
    max_retries: int = MAX_REJECTIONS
    retry_on: Tuple[Type[BaseException], ...] = (RejectedSample,)


SAMPLING_RETRY_CONFIG = RetryConfig()


@dataclass
class RetryStats:
    """Accepted draws, exhausted points and rejection reasons across a sweep."""
    accepted: int = 0
    exhausted: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def rejections(self) -> int:
        return sum(self.reasons.values())

    def record_rejection(self, reason: str):
        # "pole_margin: (bu;q) too close to zero" -> "pole_margin"
        self.reasons[reason.split(":", 1)[0]] += 1

    def as_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "exhausted": self.exhausted,
            "rejections": self.rejections,
            "rejections_per_point": round(self.rejections / max(self.accepted + self.exhausted, 1), 2),
            "reasons": dict(sorted(self.reasons.items())),
        }


def retry_call(
    func: Callable,
    args: tuple = (),
    kwargs: Optional[dict] = None,
    config: Optional[RetryConfig] = None,
    on_retry: Optional[Callable] = None,
    stats: Optional[RetryStats] = None,
) -> Any:
    """
    Call ``func`` until it stops raising one of ``config.retry_on``.

    ``on_retry(attempt, exc)`` runs after every rejected attempt except the
    last one. Exceptions outside ``config.retry_on`` propagate unchanged.

    Raises:
        RetriesExhausted once max_retries + 1 attempts have all been rejected
    """
    config = config or SAMPLING_RETRY_CONFIG
    kwargs = kwargs or {}
    rejected = 0

    def before_next(retry_state):
        nonlocal rejected
        rejected += 1
        exc = retry_state.outcome.exception()
        if stats is not None:
            stats.record_rejection(str(exc))
        if on_retry:
            on_retry(rejected, exc)

    attempt = retry(
        stop=stop_after_attempt(config.max_retries + 1),
        wait=wait_none(),
        retry=retry_if_exception_type(config.retry_on),
        before_sleep=before_next,
    )(lambda: func(*args, **kwargs))

    try:
        result = attempt()
    except RetryError as exc:
        last = exc.last_attempt.exception()
        if stats is not None:
            stats.record_rejection(str(last))
            stats.exhausted += 1
        logger.debug("resampling exhausted after %d attempts", config.max_retries + 1)
        raise RetriesExhausted(config.max_retries + 1, last) from last

    if stats is not None:
        stats.accepted += 1
    return result


__all__ = [
    'retry_call',
    'RetryConfig',
    'RetryStats',
    'RejectedSample',
    'RetriesExhausted',
    'SAMPLING_RETRY_CONFIG',
]
