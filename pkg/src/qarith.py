# src/qarith.py
"""
Core q-arithmetic: the truncation context, q-shifted factorials (finite,
infinite, multiple) and q-binomial coefficients.

Every other module consumes these. Scalars are Python ``complex``; infinite
products and sums come back as ``SeriesValue`` so callers always see the
truncation error they inherited.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from config import (
    DEFAULT_Q,
    EPS,
    MAX_PRODUCT_TERMS,
    MAX_SERIES_TERMS,
    POLE_THRESHOLD,
    STALL_WINDOW,
)
from errors import InvalidContext, NonConvergence, PoleParameter
from observability import log

INF = math.inf

Scalar = Union[complex, float, int]


def check_finite(value, what="value"):
    """Raise OverflowError if value (scalar or array) has a non-finite entry."""
    if not np.all(np.isfinite(np.asarray(value))):
        raise OverflowError(f"{what} is not finite")
    return value


# -----------------------
# Context
# -----------------------
@lru_cache(maxsize=512)
def _q_powers(q: complex, n: int) -> np.ndarray:
    powers = np.power(q, np.arange(n, dtype=float)).astype(complex)
    powers.setflags(write=False)
    return powers


@dataclass(frozen=True)
class QContext:
    """Base q plus the truncation policy. Immutable."""

    q: complex = DEFAULT_Q
    eps: float = EPS
    max_series_terms: int = MAX_SERIES_TERMS
    max_product_terms: int = MAX_PRODUCT_TERMS
    stall_window: int = STALL_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        if not np.isfinite(self.q) or not abs(self.q) < 1:
            raise InvalidContext(f"|q| must be < 1, got q={self.q}")
        if not self.eps > 0:
            raise InvalidContext(f"eps must be > 0, got {self.eps}")
        for name in ("max_series_terms", "max_product_terms", "stall_window"):
            if int(getattr(self, name)) < 1:
                raise InvalidContext(f"{name} must be >= 1")

    @classmethod
    def from_config(cls, q=None):
        return cls(q=DEFAULT_Q if q is None else q)

    def with_q(self, q) -> "QContext":
        return replace(self, q=q)

    def powers(self, n: int) -> np.ndarray:
        """Read-only table [q^0, ..., q^(n-1)]."""
        return _q_powers(self.q, int(n))

    def converged(self, err_est: float, value) -> bool:
        return err_est <= self.eps * max(1.0, float(np.max(np.abs(value))))


@dataclass(frozen=True)
class SeriesValue:
    """A truncated value with its estimated absolute error."""

    value: complex
    err_est: float
    terms_used: int
    converged: bool

    def require(self, what="series"):
        """Return the value, or raise NonConvergence."""
        if not self.converged:
            raise NonConvergence(
                f"{what} did not converge (err_est={self.err_est:.3e}, terms={self.terms_used})",
                err_est=self.err_est,
                terms_used=self.terms_used,
            )
        return self.value


# -----------------------
# q-shifted factorials
# -----------------------
def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    return int(n)


def qpoch_finite(a: Scalar, n: int, ctx: QContext) -> complex:
    """(a;q)_n = prod_{k<n} (1 - a q^k), exact product."""
    n = _check_order(n)
    if n == 0:
        return 1 + 0j
    factors = 1.0 - complex(a) * ctx.powers(n)
    value = complex(np.prod(factors))
    return check_finite(value, f"({a};q)_{n}")


def product_cutoff(abs_a: float, abs_q: float, ctx: QContext, target: Optional[float] = None):
    """Smallest M whose log-tail bound is below ``target`` (default eps/2).

    Returns (M, bound, capped). The tail bound is
    |a||q|^M / (1 - |q|) / (1 - |a||q|^M), valid once |a||q|^M < 1.
    """
    if abs_a == 0.0:
        return 0, 0.0, False
    if abs_q == 0.0:
        return 1, 0.0, False
    target = 0.5 * ctx.eps if target is None else target
    start = math.log(target * (1.0 - abs_q) / (4.0 * abs_a)) / math.log(abs_q)
    m = max(0, int(start) - 2)
    while m <= ctx.max_product_terms:
        tail = abs_a * abs_q ** m
        if tail < 1.0:
            bound = tail / (1.0 - abs_q) / (1.0 - tail)
            if bound <= target:
                return m, bound, False
        m += 1
    tail = abs_a * abs_q ** ctx.max_product_terms
    bound = tail / (1.0 - abs_q) / (1.0 - tail) if tail < 1.0 else math.inf
    return ctx.max_product_terms, bound, True


def _stable_product(factors: np.ndarray) -> complex:
    # log space unless some factor is (numerically) zero
    if factors.size == 0:
        return 1 + 0j
    if np.min(np.abs(factors)) < 1e-12:
        return complex(np.prod(factors))
    return complex(np.exp(np.sum(np.log(factors))))


def qpoch_inf(a: Scalar, ctx: QContext, target: Optional[float] = None) -> SeriesValue:
    """(a;q)_inf truncated at the first M whose relative tail bound is below ``target``."""
    a = complex(a)
    if a == 0:
        return SeriesValue(1 + 0j, 0.0, 0, True)
    m, bound, capped = product_cutoff(abs(a), abs(ctx.q), ctx, target)
    value = _stable_product(1.0 - a * ctx.powers(m))
    check_finite(value, f"({a};q)_inf")
    err = abs(value) * math.expm1(bound) if math.isfinite(bound) else abs(value)
    converged = not capped and ctx.converged(err, value)
    if not converged:
        log("qarith", "debug", "product_not_converged", a=a, terms=m, err_est=err)
    return SeriesValue(value, err, m, converged)


def share_target(ctx: QContext, factors: int) -> float:
    """Per-factor tail target so that ``factors`` truncated products stay within eps/2 together."""
    return 0.5 * ctx.eps / max(int(factors), 1)


def qpoch_multi(params: Sequence[Scalar], n, ctx: QContext, factors: Optional[int] = None):
    """(a_1, ..., a_m; q)_n. Returns complex for finite n, SeriesValue for INF.

    For INF the eps budget is split over ``factors`` products (default m).
    """
    if n != INF:
        value = 1 + 0j
        for a in params:
            value *= qpoch_finite(a, n, ctx)
        return check_finite(value, "multiple q-shifted factorial")

    target = share_target(ctx, len(params) if factors is None else factors)
    parts = [qpoch_inf(a, ctx, target) for a in params]
    value = 1 + 0j
    for part in parts:
        value *= part.value
    err = 0.0
    for i, part in enumerate(parts):
        others = 1.0
        for j, other in enumerate(parts):
            if j != i:
                others *= abs(other.value)
        err += part.err_est * others
    terms = max((p.terms_used for p in parts), default=0)
    return SeriesValue(
        check_finite(value, "multiple q-shifted factorial"),
        err,
        terms,
        all(p.converged for p in parts) and ctx.converged(err, value),
    )


def qpoch_ratio(numer: Sequence[Scalar], denom: Sequence[Scalar], ctx: QContext) -> SeriesValue:
    """(numer;q)_inf / (denom;q)_inf with a pole check on the denominator."""
    factors = len(numer) + len(denom)
    top = qpoch_multi(numer, INF, ctx, factors)
    bottom = qpoch_multi(denom, INF, ctx, factors)
    if abs(bottom.value) < POLE_THRESHOLD:
        raise PoleParameter(f"vanishing denominator product over {list(denom)}", factor=bottom.value)
    value = top.value / bottom.value
    err = top.err_est / abs(bottom.value) + abs(value) * bottom.err_est / abs(bottom.value)
    return SeriesValue(
        check_finite(value, "q-product ratio"),
        err,
        max(top.terms_used, bottom.terms_used),
        top.converged and bottom.converged and ctx.converged(err, value),
    )


def qbinom(n: int, k: int, ctx: QContext) -> complex:
    """Gaussian binomial [n k]_q as prod_{j<=k} (1 - q^(n-k+j)) / (1 - q^j)."""
    n = _check_order(n)
    k = int(k)
    if k < 0 or k > n:
        return 0j
    k = min(k, n - k)
    if k == 0:
        return 1 + 0j
    p = ctx.powers(n + 1)
    return complex(np.prod((1.0 - p[n - k + 1 : n + 1]) / (1.0 - p[1 : k + 1])))


# -----------------------
# Helpers shared by the series modules
# -----------------------
class PochhammerTable:
    """Lazily extended table of (a;q)_n, n = 0, 1, 2, ..."""

    def __init__(self, a: Scalar, ctx: QContext, check_pole=False):
        self.a = complex(a)
        self.ctx = ctx
        self.check_pole = check_pole
        self._values = [1 + 0j]
        self._power = 1 + 0j

    def __getitem__(self, n: int) -> complex:
        while len(self._values) <= n:
            factor = 1.0 - self.a * self._power
            if self.check_pole and abs(factor) < POLE_THRESHOLD:
                raise PoleParameter(
                    f"factor 1 - {self.a} q^{len(self._values) - 1} vanishes", factor=factor
                )
            self._values.append(check_finite(self._values[-1] * factor, "q-shifted factorial"))
            self._power *= self.ctx.q
        return self._values[n]


def min_factor_modulus(z: Scalar, ctx: QContext, start: int = 0) -> float:
    """min_k |1 - z q^k| over k >= start, scanning until |z q^k| < 1/2."""
    z = complex(z)
    best = math.inf
    power = complex(ctx.q) ** start
    for _ in range(ctx.max_product_terms):
        term = z * power
        best = min(best, abs(1.0 - term))
        if abs(term) < 0.5:
            break
        power *= ctx.q
    return best
