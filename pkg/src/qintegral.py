# src/qintegral.py
"""
Jackson q-integral over [u, v]:

    int_u^v f(x) d_q x = (1 - q) sum_n [v f(v q^n) - u f(u q^n)] q^n

``f`` may return numpy arrays, in which case the integral is taken entrywise.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from config import POLE_THRESHOLD
from errors import PoleParameter
from observability import log
from qarith import QContext, SeriesValue, check_finite, qpoch_inf


@dataclass(frozen=True)
class QIntegralResult(SeriesValue):
    pass


def _scale(value) -> float:
    return float(np.max(np.abs(value)))


def jackson(f: Callable, u, v, ctx: QContext) -> QIntegralResult:
    u, v = complex(u), complex(v)
    if u == v:
        return QIntegralResult(0j, 0.0, 0, True)

    q = ctx.q
    sum_v = 0j
    sum_u = 0j
    qn = 1 + 0j
    calm = 0
    last = math.inf
    n = 0
    # keeps the geometric tail bound below eps |value|
    shrink = (1.0 - abs(q)) / (2.0 * abs(1.0 - q))
    while n < ctx.max_series_terms:
        term_v = v * f(v * qn) * qn
        term_u = u * f(u * qn) * qn
        sum_v = sum_v + term_v
        sum_u = sum_u + term_u
        last = _scale(term_v) + _scale(term_u)
        n += 1
        threshold = ctx.eps * max(_scale(sum_v - sum_u), ctx.eps) * shrink
        if _scale(term_v) <= threshold and _scale(term_u) <= threshold:
            calm += 1
            if calm >= ctx.stall_window:
                break
        else:
            calm = 0
        qn *= q

    factor = 1.0 - q
    value = factor * (sum_v - sum_u)
    check_finite(value, "Jackson q-integral")
    if isinstance(value, np.ndarray) and value.ndim == 0:
        value = complex(value)
    err = abs(factor) * last * abs(q) / (1.0 - abs(q))
    converged = calm >= ctx.stall_window and ctx.converged(err, value)
    if not converged:
        log("qintegral", "debug", "jackson_not_converged", terms=n, err_est=err)
    return QIntegralResult(value, err, n, converged)


def _product(params: Sequence, x, ctx: QContext) -> complex:
    value = 1 + 0j
    for p in params:
        value *= qpoch_inf(complex(p) * x, ctx).require("integrand product")
    return value


def weight(numer: Sequence, denom: Sequence, u, v, ctx: QContext,
           power: int = 0, extra: Optional[Callable] = None) -> Callable:
    """x -> (qx/u, qx/v, numer*x;q)_inf / (denom*x;q)_inf * x^power * extra(x).

    ``numer`` and ``denom`` list the coefficients c of the (cx;q)_inf factors.
    """
    u, v = complex(u), complex(v)
    if u == 0 or v == 0:
        raise PoleParameter("q-integral endpoints must be nonzero", factor=0.0)
    numer = [ctx.q / u, ctx.q / v] + [complex(c) for c in numer]
    denom = [complex(c) for c in denom]

    def integrand(x):
        bottom = _product(denom, x, ctx)
        if abs(bottom) < POLE_THRESHOLD:
            raise PoleParameter(f"integrand denominator vanishes at x={x}", factor=bottom)
        value = _product(numer, x, ctx) / bottom
        if power:
            value *= complex(x) ** power
        if extra is not None:
            value = value * extra(x)
        return value

    return integrand


def andrews_askey_lhs(b, c, u, v, ctx: QContext, moment: int = 0) -> QIntegralResult:
    """int_u^v (qx/u, qx/v;q)_inf / (bx, cx;q)_inf x^moment d_q x."""
    return jackson(weight([], [b, c], u, v, ctx, power=moment), u, v, ctx)
