# tests/test_qintegral.py
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from errors import PoleParameter
from polynomials import w_poly
from qarith import QContext, qpoch_multi, INF
from qintegral import andrews_askey_lhs, jackson, weight

endpoint = st.builds(
    complex,
    st.floats(min_value=-0.9, max_value=0.9),
    st.floats(min_value=-0.9, max_value=0.9),
)


def andrews_askey_rhs(b, c, u, v, ctx):
    top = qpoch_multi([ctx.q, u / v, ctx.q * v / u, b * c * u * v], INF, ctx).value
    bottom = qpoch_multi([b * u, b * v, c * u, c * v], INF, ctx).value
    return (1 - ctx.q) * v * top / bottom


# -----------------------
# Jackson integral
# -----------------------
def test_empty_interval_is_exact_zero(ctx):
    result = jackson(lambda x: 1.0 / (1.0 - x), 0.4, 0.4, ctx)
    assert result.value == 0
    assert result.err_est == 0
    assert result.converged


def test_constant_integrand(ctx):
    result = jackson(lambda x: 1.0, -0.3 + 0.2j, 0.7, ctx)
    assert result.converged
    assert close(result.value, 0.7 - (-0.3 + 0.2j), rel=1e-9)


def test_linear_integrand(ctx):
    u, v = -0.5, 0.8 + 0.1j
    result = jackson(lambda x: x, u, v, ctx)
    assert close(result.value, (v ** 2 - u ** 2) / (1 + ctx.q), rel=1e-9)


def test_swapping_endpoints_negates_exactly(ctx):
    f = lambda x: 1.0 / (1.0 - 0.3 * x)
    forward = jackson(f, -0.4, 0.9, ctx)
    backward = jackson(f, 0.9, -0.4, ctx)
    assert forward.value == -backward.value


def test_vector_valued_integrand(ctx):
    u, v = 0.2, -0.6
    result = jackson(lambda x: np.array([1.0, x]), u, v, ctx)
    assert result.value.shape == (2,)
    assert close(result.value[0], v - u, rel=1e-9)
    assert close(result.value[1], (v ** 2 - u ** 2) / (1 + ctx.q), rel=1e-9)


@settings(deadline=None, max_examples=40)
@given(u=endpoint, v=endpoint, alpha=endpoint, q=st.floats(min_value=0.1, max_value=0.8))
def test_linearity_within_error_estimates(u, v, alpha, q):
    ctx = QContext(q=q)
    f = lambda x: 1.0 / (1.0 - 0.3 * x)
    g = lambda x: x * x
    left = jackson(lambda x: alpha * f(x) + g(x), u, v, ctx)
    first = jackson(f, u, v, ctx)
    second = jackson(g, u, v, ctx)
    budget = left.err_est + abs(alpha) * first.err_est + second.err_est
    assert abs(left.value - (alpha * first.value + second.value)) <= budget + 1e-12


# -----------------------
# Weights
# -----------------------
def test_weight_rejects_zero_endpoint(ctx):
    with pytest.raises(PoleParameter):
        weight([], [0.3], 0.0, 0.5, ctx)


def test_weight_vanishes_at_shifted_endpoint(ctx):
    # (qx/v;q)_inf has a zero at x = v/q
    w = weight([], [], -0.4, 0.6, ctx)
    assert abs(w(0.6 / ctx.q)) < 1e-12


# -----------------------
# Andrews-Askey
# -----------------------
def test_andrews_askey_closed_form(ctx):
    b, c, u, v = 0.3, 0.2, -0.4, 0.6
    lhs = andrews_askey_lhs(b, c, u, v, ctx)
    assert lhs.converged
    assert close(lhs.value, andrews_askey_rhs(b, c, u, v, ctx), rel=1e-8)


def test_andrews_askey_complex_parameters(ctx):
    b, c, u, v = 0.3 + 0.2j, -0.25, -0.5 + 0.1j, 0.7
    lhs = andrews_askey_lhs(b, c, u, v, ctx)
    assert close(lhs.value, andrews_askey_rhs(b, c, u, v, ctx), rel=1e-8)


def test_andrews_askey_without_denominator(ctx):
    u, v = -0.4, 0.6
    lhs = andrews_askey_lhs(0.0, 0.0, u, v, ctx)
    expected = (1 - ctx.q) * v * qpoch_multi([ctx.q, u / v, ctx.q * v / u], INF, ctx).value
    assert close(lhs.value, expected, rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_andrews_askey_moments(ctx, n):
    b, c, u, v = 0.3, 0.2, -0.4, 0.6
    lhs = andrews_askey_lhs(b, c, u, v, ctx, moment=n)
    expected = andrews_askey_rhs(b, c, u, v, ctx) * w_poly(n, b, c, u, v, ctx)
    assert close(lhs.value, expected, rel=1e-7)


def test_andrews_askey_pole(ctx):
    with pytest.raises(PoleParameter):
        andrews_askey_lhs(1 / 0.6, 0.2, -0.4, 0.6, ctx)
