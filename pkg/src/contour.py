# src/contour.py
"""
Askey-Wilson kernels h(cos theta; a) = (a e^{i theta}, a e^{-i theta};q)_inf and
Gauss-Legendre integration over [0, pi].

Integrands handed to ``theta_quadrature`` are vectorised: they receive the
whole node array and return one value per node.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from config import MAX_QUAD_NODES, MIN_QUAD_NODES, POLE_THRESHOLD
from errors import PoleParameter
from observability import log
from qarith import QContext, SeriesValue, check_finite, product_cutoff, qpoch_inf, share_target


@dataclass(frozen=True)
class ThetaIntegralResult:
    value: complex
    err_est: float
    nodes_used: int
    converged: bool

    def require(self, what="theta integral"):
        return SeriesValue(self.value, self.err_est, self.nodes_used, self.converged).require(what)


def h_kernel(theta: float, a, ctx: QContext) -> SeriesValue:
    """h(cos theta; a) as the product of the two conjugate Pochhammers."""
    a = complex(a)
    turn = complex(math.cos(theta), math.sin(theta))
    target = share_target(ctx, 2)
    left = qpoch_inf(a * turn, ctx, target)
    right = qpoch_inf(a / turn, ctx, target)
    value = left.value * right.value
    err = left.err_est * abs(right.value) + right.err_est * abs(left.value)
    return SeriesValue(
        check_finite(value, "h kernel"),
        err,
        max(left.terms_used, right.terms_used),
        left.converged and right.converged and ctx.converged(err, value),
    )


def h_product(theta, params: Sequence, ctx: QContext) -> np.ndarray:
    """prod_a prod_k (1 - 2 a q^k cos theta + a^2 q^2k), vectorised over theta."""
    cos_t = np.cos(np.asarray(theta, dtype=float))
    value = np.ones(cos_t.shape, dtype=complex)
    for a in params:
        a = complex(a)
        if a == 0:
            continue
        m, _, _ = product_cutoff(abs(a), abs(ctx.q), ctx)
        scaled = a * ctx.powers(m)
        factors = 1.0 - 2.0 * np.multiply.outer(cos_t, scaled) + scaled ** 2
        value = value * np.prod(factors, axis=-1)
    return check_finite(value, "h kernel product")


def aw_weight(theta, params: Sequence, ctx: QContext) -> np.ndarray:
    """h(cos 2 theta; 1) / h(cos theta; a_1, ..., a_m)."""
    bottom = h_product(theta, params, ctx)
    if np.min(np.abs(bottom)) < POLE_THRESHOLD:
        raise PoleParameter(f"Askey-Wilson denominator vanishes for {list(params)}", factor=float(np.min(np.abs(bottom))))
    return h_product(2.0 * np.asarray(theta, dtype=float), [1.0], ctx) / bottom


@lru_cache(maxsize=16)
def _nodes(n: int):
    # Gauss-Legendre on [0, pi]
    x, w = np.polynomial.legendre.leggauss(n)
    theta = 0.5 * math.pi * (x + 1.0)
    weights = 0.5 * math.pi * w
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


def _rule(g: Callable, n: int):
    theta, weights = _nodes(n)
    values = np.asarray(g(theta), dtype=complex)
    return complex(np.dot(weights, values))


def theta_quadrature(g: Callable, ctx: QContext) -> ThetaIntegralResult:
    """int_0^pi g(theta) d theta, doubling the node count until two rules agree."""
    n = MIN_QUAD_NODES
    previous = _rule(g, n)
    err = math.inf
    while n < MAX_QUAD_NODES:
        n *= 2
        current = _rule(g, n)
        err = abs(current - previous)
        previous = current
        if err <= ctx.eps * max(abs(current), ctx.eps):
            break

    check_finite(previous, "theta integral")
    converged = err <= ctx.eps * max(1.0, abs(previous))
    if not converged:
        log("contour", "debug", "quadrature_not_converged", nodes=n, err_est=err)
    return ThetaIntegralResult(previous, err, n, converged)


def askey_wilson(a, b, c, d, ctx: QContext) -> ThetaIntegralResult:
    """int_0^pi h(cos 2 theta; 1) / h(cos theta; a, b, c, d) d theta."""
    params = [a, b, c, d]
    return theta_quadrature(lambda theta: aw_weight(theta, params, ctx), ctx)
