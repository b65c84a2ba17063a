# src/hyperseries.py
"""
Basic hypergeometric series and the multiple sums built on them.

    phi(a_1..a_r; b_1..b_s; q, z)
        = sum_n (a_1..a_r;q)_n / (q, b_1..b_s;q)_n [(-1)^n q^(n(n-1)/2)]^(s-r+1) z^n

Parameters of ``phi`` may be numpy arrays (one series per entry, summed in
lock-step); everything else here works on scalars.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from config import MULTISUM_START, POLE_THRESHOLD
from errors import PoleParameter
from observability import log
from polynomials import hahn_hom, rogers_szego
from qarith import INF, PochhammerTable, QContext, SeriesValue, check_finite, qpoch_multi, qpoch_ratio


@dataclass(frozen=True)
class PhiSpec:
    num_params: Tuple
    den_params: Tuple
    z: complex

    @classmethod
    def balanced(cls, num_params: Sequence, den_params: Sequence, z) -> "PhiSpec":
        """Pad the shorter parameter list with zeros so that r = s + 1."""
        num, den = list(num_params), list(den_params)
        while len(num) < len(den) + 1:
            num.append(0.0)
        while len(den) + 1 < len(num):
            den.append(0.0)
        return cls(tuple(num), tuple(den), z)


def _as_arrays(values):
    return [np.asarray(v, dtype=complex) for v in values]


def phi(spec: PhiSpec, ctx: QContext) -> SeriesValue:
    """Sum the series until the geometric tail estimate stays below eps |partial|."""
    num = _as_arrays(spec.num_params)
    den = _as_arrays(spec.den_params)
    z = np.asarray(spec.z, dtype=complex)
    shape = np.broadcast_shapes(z.shape, *(a.shape for a in num + den))
    excess = len(den) - len(num) + 1
    q = ctx.q

    term = np.ones(shape, dtype=complex)
    total = term.copy()
    qn = 1 + 0j
    calm = 0
    err = math.inf
    terms_used = 1

    for n in range(ctx.max_series_terms):
        upper = np.ones(shape, dtype=complex)
        for a in num:
            upper = upper * (1.0 - a * qn)
        lower = np.full(shape, 1.0 - qn * q, dtype=complex)
        for b in den:
            lower = lower * (1.0 - b * qn)

        live = (term != 0) & (upper != 0)
        near_pole = np.abs(lower) < POLE_THRESHOLD
        if np.any(near_pole & live):
            raise PoleParameter(f"lower parameter factor vanishes at n={n}", factor=complex(np.min(np.abs(lower))))

        ratio = np.where(live, upper / np.where(near_pole, 1.0, lower), 0.0) * z
        if excess:
            ratio = ratio * (-qn) ** excess
        term = term * ratio
        total = total + term
        terms_used = n + 2

        if not np.any(term):
            err = 0.0
            break

        rho = np.abs(ratio)
        if excess == 0:
            rho = np.maximum(rho, np.abs(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(rho < 1.0, np.abs(term) * rho / (1.0 - rho), math.inf)
        err = float(np.max(tail))
        if np.all(tail <= ctx.eps * np.abs(total)):
            calm += 1
            if calm >= ctx.stall_window:
                break
        else:
            calm = 0
        qn *= q

    check_finite(total, "basic hypergeometric series")
    value = complex(total) if total.ndim == 0 else total
    converged = math.isfinite(err) and ctx.converged(err, value)
    if not converged:
        log("hyperseries", "debug", "phi_not_converged", terms=terms_used, err_est=err)
    return SeriesValue(value, err, terms_used, converged)


def q_gauss(a, b, c, ctx: QContext) -> SeriesValue:
    """(c/a, c/b;q)_inf / (c, c/(ab);q)_inf, the sum of 2phi1(a, b; c; q, c/(ab))."""
    a, b, c = complex(a), complex(b), complex(c)
    return qpoch_ratio([c / a, c / b], [c, c / (a * b)], ctx)


# -----------------------
# Multiple sums
# -----------------------
def _shell(k: int, term: Callable, inner: int, outer: int):
    total = 0j
    magnitude = 0.0
    for index in itertools.product(range(outer + 1), repeat=k):
        if max(index) <= inner:
            continue
        value = term(index)
        total += value
        magnitude += abs(value)
    return total, magnitude


def multisum(k: int, term: Callable[[Tuple[int, ...]], complex], ctx: QContext,
             start: int = MULTISUM_START) -> SeriesValue:
    """Sum term over N^k on a growing box [0, N]^k, N doubling from ``start``.

    Stops once the newest shell adds at most eps |partial| in absolute terms,
    or when N reaches max_series_terms^(1/k).
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    cap = max(1, int(ctx.max_series_terms ** (1.0 / k) + 1e-9))
    outer = min(start, cap)
    inner = -1
    total = 0j
    while True:
        shell, magnitude = _shell(k, term, inner, outer)
        total += shell
        check_finite(total, "multiple sum")
        if magnitude <= ctx.eps * abs(total) or outer >= cap:
            break
        inner, outer = outer, min(2 * outer, cap)

    converged = ctx.converged(magnitude, total)
    if not converged:
        log("hyperseries", "debug", "multisum_not_converged", k=k, box=outer, err_est=magnitude)
    return SeriesValue(total, magnitude, (outer + 1) ** k, converged)


class _Powers:
    # lazily grown [1, z, z^2, ...]
    def __init__(self, z):
        self.z = complex(z)
        self._values = [1 + 0j]

    def __getitem__(self, n):
        while len(self._values) <= n:
            self._values.append(self._values[-1] * self.z)
        return self._values[n]


def qlauricella(a, c, bs: Sequence, ys: Sequence, ctx: QContext) -> SeriesValue:
    """sum (a;q)_N prod (b_i;q)_{n_i} y_i^{n_i} / ((c;q)_N prod (q;q)_{n_i}), N = sum n_i."""
    if len(bs) != len(ys) or not bs:
        raise ValueError("bs and ys must be non-empty and of equal length")
    a_poch = PochhammerTable(a, ctx)
    c_poch = PochhammerTable(c, ctx, check_pole=True)
    q_poch = PochhammerTable(ctx.q, ctx)
    b_poch = [PochhammerTable(b, ctx) for b in bs]
    y_pow = [_Powers(y) for y in ys]

    def term(index):
        total = sum(index)
        value = a_poch[total] / c_poch[total]
        for n, bp, yp in zip(index, b_poch, y_pow):
            value *= bp[n] * yp[n] / q_poch[n]
        return value

    return multisum(len(bs), term, ctx)


def multilinear_hahn_sum(a, c, alphas: Sequence, xs: Sequence, ys: Sequence, ctx: QContext) -> SeriesValue:
    """sum (a;q)_N prod Phi_{n_i}^(alpha_i)(x_i, y_i) / ((c;q)_N prod (q;q)_{n_i})."""
    if not (len(alphas) == len(xs) == len(ys)) or not alphas:
        raise ValueError("alphas, xs and ys must be non-empty and of equal length")
    a_poch = PochhammerTable(a, ctx)
    c_poch = PochhammerTable(c, ctx, check_pole=True)
    q_poch = PochhammerTable(ctx.q, ctx)
    factors = [
        lru_cache(maxsize=None)(lambda n, al=al, x=x, y=y: hahn_hom(n, al, x, y, ctx) / q_poch[n])
        for al, x, y in zip(alphas, xs, ys)
    ]

    def term(index):
        total = sum(index)
        value = a_poch[total] / c_poch[total]
        for n, factor in zip(index, factors):
            value *= factor(n)
        return value

    return multisum(len(alphas), term, ctx)


def rogers_szego_multisum(k: int, a, b, us: Sequence, ctx: QContext) -> SeriesValue:
    """sum h_{N+k}(a, b|q) prod u_i^{n_i} / (q;q)_{n_i}."""
    q_poch = PochhammerTable(ctx.q, ctx)
    h = lru_cache(maxsize=None)(lambda n: rogers_szego(n, a, b, ctx))
    u_pow = [_Powers(u) for u in us]

    def term(index):
        value = h(sum(index) + k)
        for n, up in zip(index, u_pow):
            value *= up[n] / q_poch[n]
        return value

    return multisum(len(us), term, ctx)


def srivastava_jain_sum(k: int, a, b, alphas: Sequence, us: Sequence, vs: Sequence,
                        ctx: QContext) -> SeriesValue:
    """sum h_{N+k}(a, b|q) prod Phi_{n_i}^(alpha_i)(u_i, v_i) / (q;q)_{n_i}."""
    if not (len(alphas) == len(us) == len(vs)) or not alphas:
        raise ValueError("alphas, us and vs must be non-empty and of equal length")
    q_poch = PochhammerTable(ctx.q, ctx)
    h = lru_cache(maxsize=None)(lambda n: rogers_szego(n, a, b, ctx))
    factors = [
        lru_cache(maxsize=None)(lambda n, al=al, u=u, v=v: hahn_hom(n, al, u, v, ctx) / q_poch[n])
        for al, u, v in zip(alphas, us, vs)
    ]

    def term(index):
        value = h(sum(index) + k)
        for n, factor in zip(index, factors):
            value *= factor(n)
        return value

    return multisum(len(alphas), term, ctx)


def hahn_bilinear_sum(alpha, beta, x, y, u, v, t, ctx: QContext) -> SeriesValue:
    """sum Phi_n^(alpha)(x, y) Phi_n^(beta)(u, v) t^n / (q;q)_n."""
    q_poch = PochhammerTable(ctx.q, ctx)
    t_pow = _Powers(t)

    def term(index):
        (n,) = index
        return hahn_hom(n, alpha, x, y, ctx) * hahn_hom(n, beta, u, v, ctx) * t_pow[n] / q_poch[n]

    return multisum(1, term, ctx)


# -----------------------
# Partial-fraction sums
# -----------------------
def _no_params(_pivot):
    return []


def partial_fraction_sum(k: int, a, b, ctx: QContext,
                         upper: Optional[Callable] = None, lower: Optional[Callable] = None,
                         numer: Optional[Callable] = None, denom: Optional[Callable] = None) -> SeriesValue:
    """Two-term sum over pivots (p, o) = (a, b) and (b, a) of

        p^k (numer(p);q)_inf / (o/p, denom(p);q)_inf
            * phi(upper(p); qp/o, lower(p); q, q^(k+1))

    with parameter lists padded to r = s + 1. Empty callables give the
    partial-fraction form of h_k(a, b|q).
    """
    upper = upper or _no_params
    lower = lower or _no_params
    numer = numer or _no_params
    denom = denom or _no_params
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise PoleParameter("partial-fraction form needs a, b != 0", factor=0.0)
    z = ctx.q ** (k + 1)

    value = 0j
    err = 0.0
    terms = 0
    converged = True
    for p, o in ((a, b), (b, a)):
        bottom_params = [o / p] + list(denom(p))
        top_params = list(numer(p))
        factors = len(bottom_params) + len(top_params)
        bottom = qpoch_multi(bottom_params, INF, ctx, factors)
        if abs(bottom.value) < POLE_THRESHOLD:
            raise PoleParameter(f"(b/a;q)_inf-type factor vanishes for pivot {p}", factor=bottom.value)
        top = qpoch_multi(top_params, INF, ctx, factors)
        series = phi(PhiSpec.balanced(upper(p), [ctx.q * p / o] + list(lower(p)), z), ctx)
        prefactor = p ** k * top.value / bottom.value
        part = prefactor * series.value
        value += part
        err += abs(prefactor) * series.err_est + abs(part) * (
            top.err_est / max(abs(top.value), 1e-300) + bottom.err_est / abs(bottom.value)
        )
        terms = max(terms, series.terms_used)
        converged = converged and series.converged and top.converged and bottom.converged

    check_finite(value, "partial-fraction sum")
    # converged once every pivot term met its own target; the pivots may cancel,
    # so err_est is absolute and can exceed eps |value|
    return SeriesValue(value, err, terms, converged)


def rs_partial_fraction(k: int, a, b, ctx: QContext) -> SeriesValue:
    """h_k(a, b|q) through its partial-fraction series."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    return partial_fraction_sum(k, a, b, ctx)
