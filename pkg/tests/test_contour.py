# tests/test_contour.py
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from contour import askey_wilson, aw_weight, h_kernel, h_product, theta_quadrature
from errors import PoleParameter
from qarith import INF, QContext, qpoch_inf, qpoch_multi

small = st.builds(
    complex,
    st.floats(min_value=-0.6, max_value=0.6),
    st.floats(min_value=-0.6, max_value=0.6),
)


def askey_wilson_closed_form(a, b, c, d, ctx):
    top = qpoch_multi([a * b * c * d], INF, ctx).value
    bottom = qpoch_multi([ctx.q, a * b, a * c, a * d, b * c, b * d, c * d], INF, ctx).value
    return 2 * math.pi * top / bottom


# -----------------------
# Kernels
# -----------------------
def test_h_kernel_at_zero_parameter(ctx):
    assert h_kernel(0.7, 0.0, ctx).value == 1


def test_h_kernel_real_for_real_parameter(ctx):
    value = h_kernel(1.1, 0.45, ctx).value
    assert abs(value.imag) <= 1e-12 * abs(value)


@pytest.mark.parametrize("a", [0.3, -0.5 + 0.2j, 0.8j])
def test_h_kernel_product_and_paired_forms_agree(ctx, a):
    theta = np.array([0.0, 0.4, 1.9, math.pi])
    paired = h_product(theta, [a], ctx)
    for t, value in zip(theta, paired):
        assert close(h_kernel(t, a, ctx).value, value, rel=1e-10)


@settings(deadline=None, max_examples=40)
@given(a=small, theta=st.floats(min_value=0.0, max_value=math.pi), q=st.floats(min_value=0.1, max_value=0.8))
def test_h_kernel_bounded(a, theta, q):
    ctx = QContext(q=q)
    bound = abs(qpoch_inf(-abs(a), ctx).value) ** 2
    assert abs(h_kernel(theta, a, ctx).value) <= bound * (1 + 1e-10)


def test_h_product_skips_zero_parameters(ctx):
    theta = np.linspace(0.0, math.pi, 5)
    assert np.allclose(h_product(theta, [0.0, 0.3], ctx), h_product(theta, [0.3], ctx), rtol=1e-15)


def test_aw_weight_pole(ctx):
    # h(cos 0; 1) vanishes in the denominator
    with pytest.raises(PoleParameter):
        aw_weight(np.array([0.0, 1.0]), [1.0, 0.2], ctx)


# -----------------------
# Quadrature
# -----------------------
def test_quadrature_of_constant(ctx):
    result = theta_quadrature(lambda theta: np.ones_like(theta), ctx)
    assert result.converged
    assert close(result.value, math.pi, rel=1e-12)


def test_quadrature_of_cosine(ctx):
    result = theta_quadrature(np.cos, ctx)
    assert result.converged
    assert abs(result.value) < 1e-12


def test_quadrature_of_smooth_periodic(ctx):
    result = theta_quadrature(lambda theta: np.exp(np.cos(theta)), ctx)
    # pi I_0(1)
    assert close(result.value, math.pi * 1.2660658777520082, rel=1e-10)


# -----------------------
# Askey-Wilson integral
# -----------------------
def test_askey_wilson_at_zero_parameters(ctx):
    result = askey_wilson(0.0, 0.0, 0.0, 0.0, ctx)
    assert result.converged
    assert close(result.value, 2 * math.pi / qpoch_inf(ctx.q, ctx).value, rel=1e-9)


def test_askey_wilson_closed_form(ctx):
    params = (0.3, -0.2 + 0.1j, 0.4j, 0.25)
    result = askey_wilson(*params, ctx)
    assert close(result.require(), askey_wilson_closed_form(*params, ctx), rel=1e-8)


def test_askey_wilson_three_parameters(ctx):
    a, b, c = 0.35, -0.4, 0.2 + 0.3j
    expected = 2 * math.pi / qpoch_multi([ctx.q, a * b, a * c, b * c], INF, ctx).value
    assert close(askey_wilson(a, b, c, 0.0, ctx).value, expected, rel=1e-8)


def test_askey_wilson_permutation_symmetric(ctx):
    first = askey_wilson(0.3, -0.2, 0.45, 0.1j, ctx).value
    second = askey_wilson(0.1j, 0.45, 0.3, -0.2, ctx).value
    assert close(first, second, rel=1e-9)


def test_askey_wilson_real_positive_for_real_parameters():
    ctx = QContext(q=0.3)
    value = askey_wilson(0.5, -0.3, 0.2, 0.6, ctx).value
    assert value.real > 0
    assert abs(value.imag) <= 1e-10 * value.real
