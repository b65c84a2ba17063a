# src/verify.py
"""
Sampling, dual-path evaluation and sweeps over the identity registry.

A sample is a pure function of (identity, seed, point index): the generator
is seeded with all three, so sweeps are reproducible point by point and
independent of how many points came before.
"""

import math
import zlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from config import MAX_REJECTIONS, POLE_MARGIN, Q_SAMPLE_RANGE, RADIUS
from errors import (
    DomainError,
    GridInconsistent,
    NonConvergence,
    NotInKernel,
    PoleParameter,
    SamplingExhausted,
)
from identities import get_identity, registry
from observability import Metrics, log, track_stage
from qarith import QContext
from retry_utils import RejectedSample, RetriesExhausted, RetryConfig, RetryStats, retry_call

EVALUATION_ERRORS = (PoleParameter, NonConvergence, OverflowError, DomainError, NotInKernel, GridInconsistent)


@dataclass(frozen=True)
class ParamSample:
    identity_id: str
    seed: int
    point_index: int
    values: Dict[str, complex]
    q: complex


@dataclass
class IdentityReport:
    id: str
    seed: int
    point_index: int
    params: Dict[str, complex]
    q: Optional[complex]
    lhs: Optional[complex]
    rhs: Optional[complex]
    abs_resid: Optional[float]
    rel_resid: Optional[float]
    passed: bool
    reason: Optional[str] = None
    lhs_err_est: Optional[float] = None
    rhs_err_est: Optional[float] = None
    tolerance: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "seed": self.seed,
            "point_index": self.point_index,
            "params": {name: _pair(value) for name, value in self.params.items()},
            "q": _pair(self.q),
            "lhs": _pair(self.lhs),
            "rhs": _pair(self.rhs),
            "abs_resid": self.abs_resid,
            "rel_resid": self.rel_resid,
            "pass": self.passed,
            "reason": self.reason,
        }


def _pair(value):
    if value is None:
        return None
    value = complex(value)
    return [value.real, value.imag]


# -----------------------
# Sampling
# -----------------------
def _rng(identity_id: str, seed: int, point_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(identity_id.encode("utf-8")), int(point_index)])


def _disk(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.uniform())
    angle = 2.0 * math.pi * rng.uniform()
    return complex(r * math.cos(angle), r * math.sin(angle))


def sample_params(identity_id: str, seed: int, radius: float = RADIUS, pole_margin: float = POLE_MARGIN,
                  point_index: int = 0, q=None, ctx: Optional[QContext] = None,
                  max_rejections: int = MAX_REJECTIONS, stats: Optional[RetryStats] = None) -> ParamSample:
    """Draw one accepted parameter point; SamplingExhausted when the budget runs out."""
    if not 0.0 < radius < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {radius}")
    if not pole_margin > 0.0:
        raise ValueError(f"pole_margin must be positive, got {pole_margin}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")

    identity = get_identity(identity_id)
    base = ctx or QContext.from_config()
    rng = _rng(identity_id, seed, point_index)
    structure = identity.structure(point_index)
    names = identity.symbols(structure)

    def draw_once():
        q_value = complex(q) if q is not None else complex(rng.uniform(*Q_SAMPLE_RANGE))
        values = {name: _disk(rng, identity.symbol_radius(name, radius)) for name in names}
        values.update({name: complex(n) for name, n in structure.items()})
        sample_ctx = base.with_q(q_value)
        try:
            identity.guard(values, sample_ctx, pole_margin, radius)
        except (PoleParameter, OverflowError, ZeroDivisionError) as exc:
            raise RejectedSample(f"degenerate: {exc}") from exc
        return ParamSample(identity_id, int(seed), int(point_index), values, q_value)

    try:
        return retry_call(draw_once, config=RetryConfig(max_retries=max_rejections), stats=stats)
    except RetriesExhausted as exc:
        log("verify", "debug", "sampling_exhausted", id=identity_id, point=point_index, last=exc.last)
        raise SamplingExhausted(identity_id, exc.attempts) from exc


# -----------------------
# Evaluation
# -----------------------
def _describe(exc: BaseException) -> str:
    return f"{type(exc).__name__}: {exc}"


def verify_identity(identity_id: str, params: ParamSample, ctx: Optional[QContext] = None,
                    tolerance: Optional[float] = None) -> IdentityReport:
    """Evaluate both sides at ``params``; evaluation errors become failing reports."""
    identity = get_identity(identity_id)
    ctx = (ctx or QContext.from_config()).with_q(params.q)
    tol = tolerance if tolerance is not None else identity.tolerance_for(params.values)
    report = IdentityReport(
        id=identity_id,
        seed=params.seed,
        point_index=params.point_index,
        params=dict(params.values),
        q=params.q,
        lhs=None,
        rhs=None,
        abs_resid=None,
        rel_resid=None,
        passed=False,
        tolerance=tol,
    )
    try:
        lhs = identity.lhs(params.values, ctx)
        rhs = identity.rhs(params.values, ctx)
    except EVALUATION_ERRORS as exc:
        report.reason = _describe(exc)
        log("verify", "debug", "evaluation_failed", id=identity_id, point=params.point_index, reason=report.reason)
        return report
    except Exception as exc:
        # any other failure is still one failing point, not an aborted sweep
        report.reason = _describe(exc)
        log("verify", "warning", "evaluation_crashed", id=identity_id, point=params.point_index, reason=report.reason)
        return report

    report.lhs = complex(lhs.value)
    report.rhs = complex(rhs.value)
    report.lhs_err_est = float(lhs.err_est)
    report.rhs_err_est = float(rhs.err_est)
    report.abs_resid = abs(report.lhs - report.rhs)
    report.rel_resid = report.abs_resid / max(1e-300, abs(report.lhs), abs(report.rhs))

    if not lhs.converged or not rhs.converged:
        side = "lhs" if not lhs.converged else "rhs"
        err = report.lhs_err_est if side == "lhs" else report.rhs_err_est
        report.reason = f"NonConvergence: {side} did not converge (err_est={err:.3e})"
        return report

    report.passed = report.rel_resid <= tol
    return report


# -----------------------
# Sweeps
# -----------------------
def _exhausted_report(identity_id: str, seed: int, point_index: int, exc: SamplingExhausted) -> IdentityReport:
    return IdentityReport(
        id=identity_id,
        seed=int(seed),
        point_index=point_index,
        params={},
        q=None,
        lhs=None,
        rhs=None,
        abs_resid=None,
        rel_resid=None,
        passed=False,
        reason=_describe(exc),
    )


def sweep(identity_id: str, num_points: int, seed: int, ctx: Optional[QContext] = None,
          radius: float = RADIUS, pole_margin: float = POLE_MARGIN, q=None,
          tolerance: Optional[float] = None, progress: bool = False,
          max_rejections: int = MAX_REJECTIONS) -> List[IdentityReport]:
    """``num_points`` reports in point order; failures are recorded, never raised."""
    get_identity(identity_id)
    stats = RetryStats()
    reports = []
    with track_stage(identity_id):
        points = tqdm(range(num_points), desc=identity_id, disable=not progress, leave=False)
        for i in points:
            try:
                sample = sample_params(identity_id, seed, radius, pole_margin, point_index=i, q=q,
                                       ctx=ctx, max_rejections=max_rejections, stats=stats)
            except SamplingExhausted as exc:
                reports.append(_exhausted_report(identity_id, seed, i, exc))
                continue
            reports.append(verify_identity(identity_id, sample, ctx, tolerance))
    log("verify", "debug", "sampling_stats", id=identity_id, **stats.as_dict())
    return reports


@dataclass
class SweepSummary:
    rows: List[dict] = field(default_factory=list)

    @property
    def total_pass(self) -> bool:
        return all(row["failed"] == 0 for row in self.rows)

    def to_json(self) -> dict:
        return {
            "summary": self.rows,
            "total_points": sum(row["points"] for row in self.rows),
            "total_passed": sum(row["passed"] for row in self.rows),
            "total_pass": self.total_pass,
        }


def summarize(reports_by_id: Dict[str, List[IdentityReport]]) -> SweepSummary:
    summary = SweepSummary()
    for identity_id, reports in reports_by_id.items():
        metrics = Metrics(identity_id)
        for report in reports:
            metrics.record(report)
        summary.rows.append(metrics.emit())
    return summary


def sweep_all(num_points: int, seed: int, ctx: Optional[QContext] = None, radius: float = RADIUS,
              pole_margin: float = POLE_MARGIN, q=None, tolerances: Optional[Dict[str, float]] = None,
              progress: bool = False) -> Dict[str, List[IdentityReport]]:
    tolerances = tolerances or {}
    return {
        identity_id: sweep(identity_id, num_points, seed, ctx, radius, pole_margin, q,
                           tolerances.get(identity_id), progress)
        for identity_id in registry()
    }


def reports_frame(reports: List[IdentityReport]) -> pd.DataFrame:
    """One row per point, complex values split into real and imaginary columns."""
    rows = []
    for r in reports:
        rows.append({
            "id": r.id,
            "seed": r.seed,
            "point_index": r.point_index,
            "q": None if r.q is None else complex(r.q).real,
            "lhs_re": None if r.lhs is None else r.lhs.real,
            "lhs_im": None if r.lhs is None else r.lhs.imag,
            "rhs_re": None if r.rhs is None else r.rhs.real,
            "rhs_im": None if r.rhs is None else r.rhs.imag,
            "abs_resid": r.abs_resid,
            "rel_resid": r.rel_resid,
            "tolerance": r.tolerance,
            "pass": r.passed,
            "reason": r.reason or "",
            "params": ", ".join(f"{k}={complex(v):.6g}" for k, v in r.params.items()),
        })
    return pd.DataFrame(rows)
