# src/identities.py
"""
Identity registry.

Every entry pairs two evaluations of the same quantity that go through
different entry points (a series against a closed product, a Jackson
integral against a theta quadrature, ...), plus the sampling rules for its
free parameters:

    symbols(structure)   names drawn uniformly from the sampling disk
    structure(i)         integer choices (degree, number of variables, ...)
                         cycled by point index
    guard(p, ctx, margin, radius)
                         raises RejectedSample for draws too close to a
                         pole or to a cancellation point
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional

import numpy as np

from config import CANCELLATION_FLOOR, ENDPOINT_FRACTION
from contour import askey_wilson, aw_weight, h_product, theta_quadrature
from errors import UnknownIdentity
from expansion import eval_expansion, expand_in_hahn, synthesize_grid
from hyperseries import (
    PhiSpec,
    hahn_bilinear_sum,
    multilinear_hahn_sum,
    multisum,
    partial_fraction_sum,
    phi,
    q_gauss,
    qlauricella,
    rogers_szego_multisum,
    rs_partial_fraction,
    srivastava_jain_sum,
)
from operators import qderiv_point, qpartial_x
from polynomials import (
    cancellation_ratio,
    hahn_hom,
    hahn_hom_terms,
    power_vector,
    rogers_szego,
    w_poly,
    w_poly_terms,
)
from qarith import PochhammerTable, QContext, SeriesValue, min_factor_modulus, qpoch_inf, qpoch_ratio
from qintegral import andrews_askey_lhs, jackson, weight
from retry_utils import RejectedSample

Params = Dict[str, complex]
EXPANSION_ORDER = 8
EXPANSION_DECAY = 0.5


@dataclass(frozen=True)
class Identity:
    id: str
    anchor: str
    lhs: Callable[[Params, QContext], object]
    rhs: Callable[[Params, QContext], object]
    lhs_path: str
    rhs_path: str
    symbols: Callable[[Dict[str, int]], List[str]]
    tolerance: float
    guard: Callable[[Params, QContext, float, float], None] = lambda p, ctx, margin, radius: None
    structure: Callable[[int], Dict[str, int]] = lambda i: {}
    wide_tolerance: Optional[float] = None
    wide_when: Callable[[Params], bool] = lambda p: False
    symbol_radius: Callable[[str, float], float] = lambda name, radius: radius

    def tolerance_for(self, p: Params) -> float:
        if self.wide_tolerance is not None and self.wide_when(p):
            return self.wide_tolerance
        return self.tolerance


# -----------------------
# Shared helpers
# -----------------------
def _int(p: Params, name: str) -> int:
    return int(round(p[name].real))


def _exact(value) -> SeriesValue:
    return SeriesValue(complex(value), 0.0, 0, True)


def _terms_of(part) -> int:
    return getattr(part, "terms_used", getattr(part, "nodes_used", 0))


def _times(*parts, scale=1.0) -> SeriesValue:
    """Product of plain scalars and truncated values with relative errors added."""
    value = complex(scale)
    rel = 0.0
    terms = 0
    converged = True
    for part in parts:
        if isinstance(part, (int, float, complex)):
            value *= part
            continue
        value *= part.value
        rel += part.err_est / max(abs(part.value), 1e-300)
        terms = max(terms, _terms_of(part))
        converged = converged and part.converged
    return SeriesValue(value, abs(value) * rel, terms, converged)


def _reject(reason: str):
    raise RejectedSample(reason)


def _poles(ctx: QContext, margin: float, **factors):
    """Each z must keep |1 - z q^k| >= margin for every k >= 0."""
    for name, z in factors.items():
        if min_factor_modulus(z, ctx) < margin:
            _reject(f"pole_margin: ({name};q) too close to zero")


def _nonzero(margin: float, **values):
    for name, z in values.items():
        if abs(z) < margin:
            _reject(f"small_parameter: |{name}| < {margin}")


def _endpoints(p: Params, ctx: QContext, margin: float, radius: float):
    u, v = p["u"], p["v"]
    floor = max(margin, ENDPOINT_FRACTION * radius)
    _nonzero(floor, u=u, v=v)
    _poles(ctx, margin, **{"u/v": u / v, "qv/u": ctx.q * v / u})


def _not_cancelled(what: str, terms):
    if cancellation_ratio(np.asarray(terms)) < CANCELLATION_FLOOR:
        _reject(f"cancellation: {what} nearly vanishes")


def _ortho_constant(ctx: QContext) -> SeriesValue:
    """(q;q)_inf / (2 pi)."""
    return _times(qpoch_inf(ctx.q, ctx), scale=1.0 / (2.0 * math.pi))


def _disk_names(prefix: str, count: int) -> List[str]:
    return [f"{prefix}{i}" for i in range(1, count + 1)]


def _indexed(p: Params, prefix: str, count: int) -> List[complex]:
    return [p[name] for name in _disk_names(prefix, count)]


# -----------------------
# q-PDE and expansion
# -----------------------
def _hahn_grid(n: int, alpha, ctx: QContext):
    return synthesize_grid([0.0] * n + [1.0], alpha, ctx)


def _qpde_structure(i: int):
    return {"n": i % 13}


def _qpde_lhs(p, ctx):
    grid = qpartial_x(_hahn_grid(_int(p, "n"), p["alpha"], ctx), ctx.q)
    return _exact(grid.evaluate(p["x"], p["y"]))


def _qpde_shifted(p, ctx):
    n, alpha, x = _int(p, "n"), p["alpha"], p["x"]
    return lambda t: hahn_hom(n, alpha, x, t, ctx) - alpha * hahn_hom(n, alpha, ctx.q * x, t, ctx)


def _qpde_rhs(p, ctx):
    return _exact(qderiv_point(_qpde_shifted(p, ctx), p["y"], ctx.q))


def _qpde_guard(p, ctx, margin, radius):
    _nonzero(margin, y=p["y"], x=p["x"])
    grid = qpartial_x(_hahn_grid(_int(p, "n"), p["alpha"], ctx), ctx.q)
    if grid.coeffs.size:
        x, y = p["x"], p["y"]
        big_m, big_n = grid.trunc_orders
        terms = grid.coeffs * np.multiply.outer(power_vector(x, big_m), power_vector(y, big_n))
        _not_cancelled("D_x Phi_n", terms)
        g = _qpde_shifted(p, ctx)
        spread = abs(g(y)) + abs(g(ctx.q * y))
        if abs(grid.evaluate(x, y) * y) < CANCELLATION_FLOOR * 1e-2 * spread:
            _reject("cancellation: pointwise q-difference loses precision")


def _expansion_symbols(structure):
    return ["alpha", "x", "y"] + [f"lambda_{n}" for n in range(EXPANSION_ORDER + 1)]


def _expansion_radius(name, radius):
    if name.startswith("lambda_"):
        return EXPANSION_DECAY ** int(name.split("_")[1])
    return radius


def _expansion_grid(p, ctx):
    lambdas = [p[f"lambda_{n}"] for n in range(EXPANSION_ORDER + 1)]
    return synthesize_grid(lambdas, p["alpha"], ctx)


def _expansion_lhs(p, ctx):
    e = expand_in_hahn(_expansion_grid(p, ctx), p["alpha"], ctx.q)
    return _exact(eval_expansion(e, p["x"], p["y"], ctx))


def _expansion_rhs(p, ctx):
    return _exact(_expansion_grid(p, ctx).evaluate(p["x"], p["y"]))


def _expansion_guard(p, ctx, margin, radius):
    grid = _expansion_grid(p, ctx)
    x, y = p["x"], p["y"]
    if abs(grid.evaluate(x, y)) < CANCELLATION_FLOOR * grid.evaluate_abs(x, y):
        _reject("cancellation: grid value nearly vanishes")


# -----------------------
# Generating functions
# -----------------------
def _gen_lhs(p, ctx):
    t = p["t"]
    return multilinear_hahn_sum(0.0, 0.0, [p["alpha"]], [p["x"] * t], [p["y"] * t], ctx)


def _gen_rhs(p, ctx):
    x, y, t, alpha = p["x"], p["y"], p["t"], p["alpha"]
    return qpoch_ratio([alpha * x * t], [x * t, y * t], ctx)


def _gen_guard(p, ctx, margin, radius):
    _poles(ctx, margin, xt=p["x"] * p["t"], yt=p["y"] * p["t"])


def _mehler_lhs(p, ctx):
    return hahn_bilinear_sum(p["alpha"], p["beta"], p["x"], p["y"], p["u"], p["v"], p["t"], ctx)


def _mehler_rhs(p, ctx):
    alpha, beta, x, y, u, v, t = (p[k] for k in ("alpha", "beta", "x", "y", "u", "v", "t"))
    prefactor = qpoch_ratio([alpha * x * t * v, beta * y * t * u], [x * t * v, y * t * v, y * t * u], ctx)
    series = phi(PhiSpec((alpha, beta, y * t * v), (alpha * x * t * v, beta * y * t * u), x * t * u), ctx)
    return _times(prefactor, series)


def _mehler_guard(p, ctx, margin, radius):
    alpha, beta, x, y, u, v, t = (p[k] for k in ("alpha", "beta", "x", "y", "u", "v", "t"))
    _poles(ctx, margin, xtv=x * t * v, ytv=y * t * v, ytu=y * t * u,
           alpha_xtv=alpha * x * t * v, beta_ytu=beta * y * t * u)


# -----------------------
# Jackson integrals
# -----------------------
def _uv(p):
    return p["u"], p["v"]


def _aa_closed(b, c, u, v, ctx) -> SeriesValue:
    return _times(qpoch_ratio([ctx.q, u / v, ctx.q * v / u, b * c * u * v], [b * u, b * v, c * u, c * v], ctx),
                  scale=(1.0 - ctx.q) * v)


def _aa_lhs(p, ctx):
    return andrews_askey_lhs(p["b"], p["c"], p["u"], p["v"], ctx)


def _aa_rhs(p, ctx):
    return _aa_closed(p["b"], p["c"], p["u"], p["v"], ctx)


def _aa_guard(p, ctx, margin, radius):
    b, c, (u, v) = p["b"], p["c"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, bu=b * u, bv=b * v, cu=c * u, cv=c * v)


def _moment_structure(i):
    return {"n": i % 7}


def _moment_lhs(p, ctx):
    return andrews_askey_lhs(p["b"], p["c"], p["u"], p["v"], ctx, moment=_int(p, "n"))


def _moment_rhs(p, ctx):
    b, c, (u, v) = p["b"], p["c"], _uv(p)
    return _times(_aa_closed(b, c, u, v, ctx), w_poly(_int(p, "n"), b, c, u, v, ctx))


def _moment_guard(p, ctx, margin, radius):
    _aa_guard(p, ctx, margin, radius)
    b, c, (u, v) = p["b"], p["c"], _uv(p)
    _poles(ctx, margin, bcuv=b * c * u * v)
    _not_cancelled("W_n", w_poly_terms(_int(p, "n"), b, c, u, v, ctx))


def _hahn_series_lhs(p, ctx):
    alpha, a, b, c, d, (u, v) = p["alpha"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    return jackson(weight([alpha * a], [a, b, c, d], u, v, ctx), u, v, ctx)


def _hahn_series_rhs(p, ctx):
    alpha, a, b, c, d, (u, v) = p["alpha"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    q_poch = PochhammerTable(ctx.q, ctx)

    def term(index):
        (n,) = index
        return w_poly(n, c, d, u, v, ctx) * hahn_hom(n, alpha, a, b, ctx) / q_poch[n]

    prefactor = qpoch_ratio([ctx.q, u / v, ctx.q * v / u, c * d * u * v], [c * u, c * v, d * u, d * v], ctx)
    return _times(prefactor, multisum(1, term, ctx), scale=(1.0 - ctx.q) * v)


def _hahn_series_guard(p, ctx, margin, radius):
    a, b, c, d, (u, v) = p["a"], p["b"], p["c"], p["d"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v,
           cu=c * u, cv=c * v, du=d * u, dv=d * v, cduv=c * d * u * v)


def _three_phi_two_lhs(p, ctx):
    alpha, a, b, c, (u, v) = p["alpha"], p["a"], p["b"], p["c"], _uv(p)
    return jackson(weight([alpha * a], [a, b, c], u, v, ctx), u, v, ctx)


def _three_phi_two_rhs(p, ctx):
    alpha, a, b, c, (u, v) = p["alpha"], p["a"], p["b"], p["c"], _uv(p)
    q = ctx.q
    prefactor = qpoch_ratio([q, u / v, q * v / u, alpha * a * v, b * c * u * v],
                            [a * v, b * u, b * v, c * u, c * v], ctx)
    series = phi(PhiSpec((alpha, b * v, c * v), (alpha * a * v, b * c * u * v), a * u), ctx)
    return _times(prefactor, series, scale=(1.0 - q) * v)


def _three_phi_two_guard(p, ctx, margin, radius):
    alpha, a, b, c, (u, v) = p["alpha"], p["a"], p["b"], p["c"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v, cu=c * u, cv=c * v,
           alpha_av=alpha * a * v, bcuv=b * c * u * v)


def _asv_lhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    return jackson(weight([a * b * c * u * v], [a, b, c], u, v, ctx), u, v, ctx)


def _asv_rhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    q = ctx.q
    ratio = qpoch_ratio([q, u / v, q * v / u, a * b * u * v, a * c * u * v, b * c * u * v],
                        [a * u, a * v, b * u, b * v, c * u, c * v], ctx)
    return _times(ratio, scale=(1.0 - q) * v)


def _asv_guard(p, ctx, margin, radius):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v, cu=c * u, cv=c * v)


def _qgauss_lhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    return phi(PhiSpec((b * v, c * v), (a * b * c * u * v * v,), a * u), ctx)


def _qgauss_rhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    return q_gauss(b * v, c * v, a * b * c * u * v * v, ctx)


def _qgauss_guard(p, ctx, margin, radius):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    _nonzero(margin, bv=b * v, cv=c * v)
    _poles(ctx, margin, au=a * u, abcuv2=a * b * c * u * v * v)


def _double_lhs(p, ctx):
    alpha, beta, a, b, c, d, (u, v) = p["alpha"], p["beta"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    return jackson(weight([alpha * a, beta * c], [a, b, c, d], u, v, ctx), u, v, ctx)


def _double_rhs(p, ctx):
    alpha, beta, a, b, c, d, (u, v) = p["alpha"], p["beta"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    q_poch = PochhammerTable(ctx.q, ctx)
    first = lru_cache(maxsize=None)(lambda m: hahn_hom(m, alpha, a, b, ctx) / q_poch[m])
    second = lru_cache(maxsize=None)(lambda n: hahn_hom(n, beta, c, d, ctx) / q_poch[n])
    h = lru_cache(maxsize=None)(lambda n: rogers_szego(n, u, v, ctx))

    def term(index):
        m, n = index
        return first(m) * second(n) * h(m + n)

    prefactor = qpoch_ratio([ctx.q, u / v, ctx.q * v / u], [], ctx)
    return _times(prefactor, multisum(2, term, ctx), scale=(1.0 - ctx.q) * v)


def _double_guard(p, ctx, margin, radius):
    a, b, c, d, (u, v) = p["a"], p["b"], p["c"], p["d"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v,
           cu=c * u, cv=c * v, du=d * u, dv=d * v)


# -----------------------
# Theta integrals
# -----------------------
def _aw_lhs(p, ctx):
    return askey_wilson(p["a"], p["b"], p["c"], p["d"], ctx)


def _aw_rhs(p, ctx):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    return _times(qpoch_ratio([a * b * c * d], [ctx.q, a * b, a * c, a * d, b * c, b * d, c * d], ctx),
                  scale=2.0 * math.pi)


def _aw_guard(p, ctx, margin, radius):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    _poles(ctx, margin, ab=a * b, ac=a * c, ad=a * d, bc=b * c, bd=b * d, cd=c * d)


def _exchange_structure(i):
    return {"f_choice": i % 2}


def _exchange_symbols(structure):
    base = ["a", "b", "c", "u", "v"]
    return base + (["alpha", "d"] if structure["f_choice"] else [])


def _exchange_f(p, ctx) -> Optional[Callable]:
    if not _int(p, "f_choice"):
        return None
    alpha, d = p["alpha"], p["d"]

    def f(x):
        return qpoch_inf(alpha * d * x, ctx).require("f numerator") / qpoch_inf(d * x, ctx).require("f denominator")

    return f


def _exchange_lhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    f = _exchange_f(p, ctx)

    def integrand(theta):
        def inner(x):
            return 1.0 / h_product(theta, [x], ctx)

        values = jackson(weight([], [], u, v, ctx, extra=_chain(inner, f)), u, v, ctx)
        values.require("inner q-integral")
        return aw_weight(theta, [a, b, c], ctx) * values.value

    return _times(_ortho_constant(ctx), theta_quadrature(integrand, ctx))


def _chain(inner: Callable, f: Optional[Callable]) -> Callable:
    if f is None:
        return inner
    return lambda x: inner(x) * f(x)


def _exchange_rhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    f = _exchange_f(p, ctx)
    integral = jackson(weight([a * b * c], [a, b, c], u, v, ctx, extra=f), u, v, ctx)
    return _times(qpoch_ratio([], [a * b, a * c, b * c], ctx), integral)


def _exchange_guard(p, ctx, margin, radius):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v, cu=c * u, cv=c * v,
           ab=a * b, ac=a * c, bc=b * c)
    if _int(p, "f_choice"):
        _poles(ctx, margin, du=p["d"] * u, dv=p["d"] * v)


def _curious_lhs(p, ctx):
    alpha, a, b, c, d, (u, v) = p["alpha"], p["a"], p["b"], p["c"], p["d"], _uv(p)

    def integrand(theta):
        turn = np.exp(1j * theta)
        series = phi(PhiSpec((alpha, v * turn, v / turn), (alpha * d * v, u * v), d * u), ctx)
        series.require("theta-dependent 3phi2")
        return aw_weight(theta, [a, b, c, u, v], ctx) * series.value

    return _times(_ortho_constant(ctx), theta_quadrature(integrand, ctx))


def _curious_rhs(p, ctx):
    alpha, a, b, c, d, (u, v) = p["alpha"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    q = ctx.q
    integral = jackson(weight([a * b * c, alpha * d], [a, b, c, d], u, v, ctx), u, v, ctx)
    prefactor = qpoch_ratio([d * v], [q, u / v, q * v / u, alpha * d * v, u * v, a * b, a * c, b * c], ctx)
    return _times(prefactor, integral, scale=1.0 / ((1.0 - q) * v))


def _curious_guard(p, ctx, margin, radius):
    alpha, a, b, c, d, (u, v) = p["alpha"], p["a"], p["b"], p["c"], p["d"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _poles(ctx, margin, au=a * u, av=a * v, bu=b * u, bv=b * v, cu=c * u, cv=c * v,
           du=d * u, dv=d * v, alpha_dv=alpha * d * v, uv=u * v, ab=a * b, ac=a * c, bc=b * c)


def _isv_lhs(p, ctx):
    params = [p[k] for k in ("a", "b", "c", "u", "v")]
    return _times(_ortho_constant(ctx), theta_quadrature(lambda theta: aw_weight(theta, params, ctx), ctx))


def _isv_rhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    prefactor = qpoch_ratio([a * b * c * v, b * c * u * v],
                            [a * b, a * c, b * c, a * v, b * u, b * v, c * u, c * v, u * v], ctx)
    series = phi(PhiSpec((b * c, b * v, c * v), (a * b * c * v, b * c * u * v), a * u), ctx)
    return _times(prefactor, series)


def _five_param_guard(p, ctx, margin, radius):
    names = ("a", "b", "c", "u", "v")
    values = [p[k] for k in names]
    pairs = {f"{names[i]}{names[j]}": values[i] * values[j]
             for i in range(len(names)) for j in range(i + 1, len(names))}
    _poles(ctx, margin, **pairs)


def _isv_guard(p, ctx, margin, radius):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    _five_param_guard(p, ctx, margin, radius)
    _poles(ctx, margin, abcv=a * b * c * v, bcuv=b * c * u * v)


def _beta_lhs(p, ctx):
    a, b, c, d, (u, v) = p["a"], p["b"], p["c"], p["d"], _uv(p)
    q = ctx.q
    params = [a, b, c, u, v]

    def integrand(theta):
        return aw_weight(theta, params, ctx) * h_product(theta, [d * u * v], ctx)

    prefactor = qpoch_ratio([q, q, u / v, q * v / u, u * v], [d * u, d * v], ctx)
    return _times(prefactor, theta_quadrature(integrand, ctx), scale=(1.0 - q) * v / (2.0 * math.pi))


def _beta_rhs(p, ctx):
    a, b, c, d, (u, v) = p["a"], p["b"], p["c"], p["d"], _uv(p)
    integral = jackson(weight([a * b * c, d * u * v], [a, b, c, d], u, v, ctx), u, v, ctx)
    return _times(qpoch_ratio([], [a * b, a * c, b * c], ctx), integral)


def _beta_guard(p, ctx, margin, radius):
    d, (u, v) = p["d"], _uv(p)
    _endpoints(p, ctx, margin, radius)
    _five_param_guard(p, ctx, margin, radius)
    _poles(ctx, margin, du=d * u, dv=d * v)


def _nr_lhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    params = [a, b, c, u, v]

    def integrand(theta):
        return aw_weight(theta, params, ctx) * h_product(theta, [a * b * c * u * v], ctx)

    return _times(_ortho_constant(ctx), theta_quadrature(integrand, ctx))


def _nr_rhs(p, ctx):
    a, b, c, (u, v) = p["a"], p["b"], p["c"], _uv(p)
    return qpoch_ratio([a * b * c * u, a * b * c * v, a * b * u * v, a * c * u * v, b * c * u * v],
                       [a * b, a * c, a * u, a * v, b * c, b * u, b * v, c * u, c * v, u * v], ctx)


# -----------------------
# Multilinear sums
# -----------------------
def _variables_structure(i):
    return {"k": 1 + i % 2}


def _multilinear_symbols(structure):
    k = structure["k"]
    return ["a", "c"] + _disk_names("alpha", k) + _disk_names("x", k) + _disk_names("y", k)


def _multilinear_parts(p):
    k = _int(p, "k")
    return p["a"], p["c"], _indexed(p, "alpha", k), _indexed(p, "x", k), _indexed(p, "y", k)


def _multilinear_lhs(p, ctx):
    return multilinear_hahn_sum(*_multilinear_parts(p), ctx)


def _multilinear_rhs(p, ctx):
    a, c, alphas, xs, ys = _multilinear_parts(p)
    weighted = [al * x for al, x in zip(alphas, xs)]
    prefactor = qpoch_ratio([a] + weighted, [c] + xs + ys, ctx)
    series = phi(PhiSpec.balanced([c / a] + xs + ys, weighted + [0.0] * len(xs), a), ctx)
    return _times(prefactor, series)


def _multilinear_guard(p, ctx, margin, radius):
    a, c, alphas, xs, ys = _multilinear_parts(p)
    _nonzero(margin, a=a)
    _poles(ctx, margin, c=c)
    for i, (al, x, y) in enumerate(zip(alphas, xs, ys), start=1):
        _poles(ctx, margin, **{f"x{i}": x, f"y{i}": y, f"alpha{i}x{i}": al * x})


def _lauricella_structure(i):
    return {"b_zero": i % 2}


def _lauricella_symbols(structure):
    base = ["a", "c", "y1", "y2"]
    return base if structure["b_zero"] else base + ["b1", "b2"]


def _lauricella_parts(p):
    bs = [p.get("b1", 0j), p.get("b2", 0j)]
    return p["a"], p["c"], bs, [p["y1"], p["y2"]]


def _lauricella_lhs(p, ctx):
    return qlauricella(*_lauricella_parts(p), ctx)


def _lauricella_rhs(p, ctx):
    a, c, bs, ys = _lauricella_parts(p)
    weighted = [b * y for b, y in zip(bs, ys)]
    prefactor = qpoch_ratio([a] + weighted, [c] + ys, ctx)
    series = phi(PhiSpec([c / a] + ys, weighted, a), ctx)
    return _times(prefactor, series)


def _lauricella_guard(p, ctx, margin, radius):
    a, c, bs, ys = _lauricella_parts(p)
    _nonzero(margin, a=a)
    _poles(ctx, margin, c=c, y1=ys[0], y2=ys[1], b1y1=bs[0] * ys[0], b2y2=bs[1] * ys[1])


def _hk_structure(i):
    return {"k": i % 11}


def _hk_lhs(p, ctx):
    return _exact(rogers_szego(_int(p, "k"), p["a"], p["b"], ctx))


def _hk_rhs(p, ctx):
    return rs_partial_fraction(_int(p, "k"), p["a"], p["b"], ctx)


def _partial_fraction_guard(p, ctx, margin, k: int):
    a, b = p["a"], p["b"]
    _nonzero(margin, a=a, b=b, a_minus_b=a - b)
    _poles(ctx, margin, **{"b/a": b / a, "a/b": a / b, "qa/b": ctx.q * a / b, "qb/a": ctx.q * b / a})
    _not_cancelled("h_k(a, b)", hahn_hom_terms(k, 0.0, a, b, ctx))


def _hk_guard(p, ctx, margin, radius):
    _partial_fraction_guard(p, ctx, margin, _int(p, "k"))


OFFSETS = (0, 1, 3)


def _multisum_structure(i):
    return {"s": 1 + i % 2, "offset": OFFSETS[(i // 2) % len(OFFSETS)]}


def _rs_symbols(structure):
    return ["a", "b"] + _disk_names("u", structure["s"])


def _rs_lhs(p, ctx):
    s = _int(p, "s")
    return rogers_szego_multisum(_int(p, "offset"), p["a"], p["b"], _indexed(p, "u", s), ctx)


def _rs_rhs(p, ctx):
    us = _indexed(p, "u", _int(p, "s"))

    def scaled(pivot):
        return [pivot * u for u in us]

    return partial_fraction_sum(_int(p, "offset"), p["a"], p["b"], ctx, upper=scaled, denom=scaled)


def _rs_guard(p, ctx, margin, radius):
    _partial_fraction_guard(p, ctx, margin, _int(p, "offset"))
    a, b = p["a"], p["b"]
    for i, u in enumerate(_indexed(p, "u", _int(p, "s")), start=1):
        _poles(ctx, margin, **{f"au{i}": a * u, f"bu{i}": b * u})


def _sj_symbols(structure):
    s = structure["s"]
    return ["a", "b"] + _disk_names("alpha", s) + _disk_names("u", s) + _disk_names("v", s)


def _sj_parts(p):
    s = _int(p, "s")
    return _indexed(p, "alpha", s), _indexed(p, "u", s), _indexed(p, "v", s)


def _sj_lhs(p, ctx):
    alphas, us, vs = _sj_parts(p)
    return srivastava_jain_sum(_int(p, "offset"), p["a"], p["b"], alphas, us, vs, ctx)


def _sj_rhs(p, ctx):
    alphas, us, vs = _sj_parts(p)

    def pairs(pivot):
        return [pivot * z for u, v in zip(us, vs) for z in (u, v)]

    def weighted(pivot):
        return [al * pivot * u for al, u in zip(alphas, us)]

    return partial_fraction_sum(_int(p, "offset"), p["a"], p["b"], ctx,
                                upper=pairs, lower=weighted, numer=weighted, denom=pairs)


def _sj_guard(p, ctx, margin, radius):
    _partial_fraction_guard(p, ctx, margin, _int(p, "offset"))
    a, b = p["a"], p["b"]
    for i, (al, u, v) in enumerate(zip(*_sj_parts(p)), start=1):
        _poles(ctx, margin, **{
            f"au{i}": a * u, f"bu{i}": b * u, f"av{i}": a * v, f"bv{i}": b * v,
            f"alpha{i}au{i}": al * a * u, f"alpha{i}bu{i}": al * b * u,
        })


def _fixed(*names):
    return lambda structure: list(names)


def _more_than_one(name):
    return lambda p: _int(p, name) > 1


REGISTRY: Dict[str, Identity] = {}


def _register(identity: Identity):
    REGISTRY[identity.id] = identity


_register(Identity(
    "QPDE_HAHN", "homogeneous Hahn polynomials solve D_x f = D_y (1 - alpha eta_x) f",
    _qpde_lhs, _qpde_rhs, "operators.qpartial_x", "operators.qderiv_point",
    _fixed("alpha", "x", "y"), 1e-10, _qpde_guard, _qpde_structure,
))
_register(Identity(
    "EXPANSION_ROUNDTRIP", "kernel grids of the q-PDE are Hahn expansions of their x = 0 slice",
    _expansion_lhs, _expansion_rhs, "expansion.expand_in_hahn", "operators.BivarSeries.evaluate",
    _expansion_symbols, 1e-10, _expansion_guard, symbol_radius=_expansion_radius,
))
_register(Identity(
    "GEN_FUNC", "generating function of homogeneous Hahn polynomials",
    _gen_lhs, _gen_rhs, "hyperseries.multilinear_hahn_sum", "qarith.qpoch_ratio",
    _fixed("alpha", "x", "y", "t"), 1e-8, _gen_guard,
))
_register(Identity(
    "MEHLER", "q-Mehler formula for homogeneous Hahn polynomials",
    _mehler_lhs, _mehler_rhs, "hyperseries.hahn_bilinear_sum", "hyperseries.phi",
    _fixed("alpha", "beta", "x", "y", "u", "v", "t"), 1e-8, _mehler_guard,
))
_register(Identity(
    "ANDREWS_ASKEY", "Andrews-Askey q-integral",
    _aa_lhs, _aa_rhs, "qintegral.andrews_askey_lhs", "qarith.qpoch_ratio",
    _fixed("b", "c", "u", "v"), 1e-7, _aa_guard,
))
_register(Identity(
    "MOMENT_W", "x^n moments of the Andrews-Askey weight in terms of W_n",
    _moment_lhs, _moment_rhs, "qintegral.andrews_askey_lhs", "polynomials.w_poly",
    _fixed("b", "c", "u", "v"), 1e-7, _moment_guard, _moment_structure,
))
_register(Identity(
    "QINT_HAHN_SERIES", "q-integral expanded as a W_n times Hahn series",
    _hahn_series_lhs, _hahn_series_rhs, "qintegral.jackson", "hyperseries.multisum",
    _fixed("alpha", "a", "b", "c", "d", "u", "v"), 1e-7, _hahn_series_guard,
))
_register(Identity(
    "QINT_3PHI2", "q-integral evaluated by a 3phi2 series",
    _three_phi_two_lhs, _three_phi_two_rhs, "qintegral.jackson", "hyperseries.phi",
    _fixed("alpha", "a", "b", "c", "u", "v"), 1e-7, _three_phi_two_guard,
))
_register(Identity(
    "AL_SALAM_VERMA", "Al-Salam-Verma q-integral",
    _asv_lhs, _asv_rhs, "qintegral.jackson", "qarith.qpoch_ratio",
    _fixed("a", "b", "c", "u", "v"), 1e-7, _asv_guard,
))
_register(Identity(
    "QGAUSS_STEP", "q-Gauss summation of 2phi1(bv, cv; abcuv^2; q, au)",
    _qgauss_lhs, _qgauss_rhs, "hyperseries.phi", "hyperseries.q_gauss",
    _fixed("a", "b", "c", "u", "v"), 1e-8, _qgauss_guard,
))
_register(Identity(
    "QINT_DOUBLE", "q-integral as a double Hahn-Hahn-Rogers-Szego series",
    _double_lhs, _double_rhs, "qintegral.jackson", "hyperseries.multisum",
    _fixed("alpha", "beta", "a", "b", "c", "d", "u", "v"), 1e-6, _double_guard,
))
_register(Identity(
    "ASKEY_WILSON", "Askey-Wilson integral",
    _aw_lhs, _aw_rhs, "contour.askey_wilson", "qarith.qpoch_ratio",
    _fixed("a", "b", "c", "d"), 1e-8, _aw_guard,
))
_register(Identity(
    "AW_QINT_EXCHANGE", "exchange of theta integration and Jackson q-integration",
    _exchange_lhs, _exchange_rhs, "contour.theta_quadrature", "qintegral.jackson",
    _exchange_symbols, 1e-6, _exchange_guard, _exchange_structure,
))
_register(Identity(
    "CURIOUS", "3phi2-weighted Askey-Wilson integral as a Jackson q-integral",
    _curious_lhs, _curious_rhs, "contour.theta_quadrature", "qintegral.jackson",
    _fixed("alpha", "a", "b", "c", "d", "u", "v"), 1e-6, _curious_guard,
))
_register(Identity(
    "ISV", "Ismail-Stanton-Viennot integral",
    _isv_lhs, _isv_rhs, "contour.theta_quadrature", "hyperseries.phi",
    _fixed("a", "b", "c", "u", "v"), 1e-8, _isv_guard,
))
_register(Identity(
    "LIU_BETA", "beta-type identity between a theta integral and a q-integral",
    _beta_lhs, _beta_rhs, "contour.theta_quadrature", "qintegral.jackson",
    _fixed("a", "b", "c", "d", "u", "v"), 1e-8, _beta_guard,
))
_register(Identity(
    "NASSRALLAH_RAHMAN", "Nassrallah-Rahman integral",
    _nr_lhs, _nr_rhs, "contour.theta_quadrature", "qarith.qpoch_ratio",
    _fixed("a", "b", "c", "u", "v"), 1e-8, _five_param_guard,
))
_register(Identity(
    "MULTILINEAR", "multilinear generating function for Hahn polynomials",
    _multilinear_lhs, _multilinear_rhs, "hyperseries.multilinear_hahn_sum", "hyperseries.phi",
    _multilinear_symbols, 1e-8, _multilinear_guard, _variables_structure,
    wide_tolerance=1e-6, wide_when=_more_than_one("k"),
))
_register(Identity(
    "Q_LAURICELLA", "Andrews' formula for the q-Lauricella function",
    _lauricella_lhs, _lauricella_rhs, "hyperseries.qlauricella", "hyperseries.phi",
    _lauricella_symbols, 1e-8, _lauricella_guard, _lauricella_structure,
))
_register(Identity(
    "HK_PARTIAL_FRACTION", "partial-fraction form of Rogers-Szego polynomials",
    _hk_lhs, _hk_rhs, "polynomials.rogers_szego", "hyperseries.rs_partial_fraction",
    _fixed("a", "b"), 1e-8, _hk_guard, _hk_structure,
))
_register(Identity(
    "RS_MULTISUM", "multiple Rogers-Szego generating sum",
    _rs_lhs, _rs_rhs, "hyperseries.rogers_szego_multisum", "hyperseries.partial_fraction_sum",
    _rs_symbols, 1e-8, _rs_guard, _multisum_structure,
    wide_tolerance=1e-6, wide_when=_more_than_one("s"),
))
_register(Identity(
    "SRIVASTAVA_JAIN", "Srivastava-Jain multilinear generating function",
    _sj_lhs, _sj_rhs, "hyperseries.srivastava_jain_sum", "hyperseries.partial_fraction_sum",
    _sj_symbols, 1e-8, _sj_guard, _multisum_structure,
    wide_tolerance=1e-6, wide_when=_more_than_one("s"),
))


def registry() -> List[str]:
    return list(REGISTRY)


def get_identity(identity_id: str) -> Identity:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(identity_id) from None
