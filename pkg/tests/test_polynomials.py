# tests/test_polynomials.py
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from errors import PoleParameter
from polynomials import (
    cancellation_ratio,
    hahn,
    hahn_coeffs,
    hahn_hom,
    hahn_hom_terms,
    power_vector,
    rogers_szego,
    w_poly,
    w_poly_terms,
)
from qarith import QContext, qbinom, qpoch_finite

q_real = st.floats(min_value=0.05, max_value=0.9)
unit_complex = st.builds(
    complex,
    st.floats(min_value=-0.9, max_value=0.9),
    st.floats(min_value=-0.9, max_value=0.9),
)
degree = st.integers(min_value=0, max_value=12)


def test_power_vector():
    assert list(power_vector(2.0, 3)) == [1, 2, 4, 8]
    assert list(power_vector(0.0, 2)) == [1, 0, 0]


def test_hahn_coefficients_are_binomial_times_pochhammer(ctx):
    alpha = 0.3 - 0.2j
    for k, coeff in enumerate(hahn_coeffs(6, alpha, ctx)):
        assert close(coeff, qbinom(6, k, ctx) * qpoch_finite(alpha, k, ctx), rel=1e-13)


# -----------------------
# Hahn
# -----------------------
def test_hahn_degree_zero(ctx):
    assert hahn(0, 0.4, 0.7 + 0.1j, ctx) == 1


def test_hahn_degree_one(ctx):
    alpha, x = 0.25 + 0.5j, -0.3 + 0.6j
    assert close(hahn(1, alpha, x, ctx), 1 + (1 - alpha) * x, rel=1e-14)


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_hahn_alpha_zero_is_rogers_szego_at_one(ctx, n):
    assert hahn(n, 0.0, 0.35 - 0.2j, ctx) == rogers_szego(n, 0.35 - 0.2j, 1.0, ctx)


# -----------------------
# Homogeneous Hahn
# -----------------------
@pytest.mark.parametrize("n", [0, 1, 3, 8])
def test_hahn_hom_at_x_zero(ctx, n):
    y = 0.4 - 0.3j
    assert close(hahn_hom(n, 0.7, 0.0, y, ctx), y ** n, rel=1e-14)


def test_hahn_hom_reduces_to_hahn(ctx):
    assert hahn_hom(5, 0.2j, 0.6, 1.0, ctx) == hahn(5, 0.2j, 0.6, ctx)


def test_hahn_hom_degree_two(ctx):
    q = 0.5
    alpha, x, y = 0.3 + 0.1j, 0.2 - 0.5j, -0.7 + 0.2j
    expected = y ** 2 + (1 + q) * (1 - alpha) * x * y + (1 - alpha) * (1 - alpha * q) * x ** 2
    assert close(hahn_hom(2, alpha, x, y, ctx), expected, rel=1e-13)


def test_hahn_hom_cli_oracle():
    assert close(hahn_hom(3, 0.2, 0.0, 0.4, QContext(q=0.3)), 0.064, rel=1e-14)


def test_hahn_hom_terms_sum(ctx):
    terms = hahn_hom_terms(4, 0.5, 0.3, 0.2, ctx)
    assert terms.shape == (5,)
    assert close(np.sum(terms), hahn_hom(4, 0.5, 0.3, 0.2, ctx), rel=1e-15)


@settings(deadline=None, max_examples=60)
@given(n=degree, alpha=unit_complex, x=unit_complex, y=unit_complex, t=unit_complex, q=q_real)
def test_hahn_hom_homogeneity(n, alpha, x, y, t, q):
    ctx = QContext(q=q)
    left = hahn_hom(n, alpha, t * x, t * y, ctx)
    right = t ** n * hahn_hom(n, alpha, x, y, ctx)
    scale = abs(t) ** n * float(np.sum(np.abs(hahn_hom_terms(n, alpha, x, y, ctx))))
    assert abs(left - right) <= 1e-10 * scale + 1e-300


@settings(deadline=None, max_examples=40)
@given(n=degree, x=unit_complex, y=unit_complex, q=q_real)
def test_alpha_zero_equals_rogers_szego(n, x, y, q):
    ctx = QContext(q=q)
    assert hahn_hom(n, 0.0, x, y, ctx) == rogers_szego(n, x, y, ctx)


# -----------------------
# Rogers-Szego
# -----------------------
def test_rogers_szego_degree_one(ctx):
    assert close(rogers_szego(1, 0.3 + 0.2j, -0.1, ctx), 0.2 + 0.2j, rel=1e-14)


@settings(deadline=None, max_examples=40)
@given(n=degree, x=unit_complex, y=unit_complex, q=q_real)
def test_rogers_szego_symmetric(n, x, y, q):
    ctx = QContext(q=q)
    left = rogers_szego(n, x, y, ctx)
    right = rogers_szego(n, y, x, ctx)
    scale = float(np.sum(np.abs(hahn_hom_terms(n, 0.0, x, y, ctx))))
    assert abs(left - right) <= 1e-12 * scale + 1e-300


# -----------------------
# W polynomials
# -----------------------
def test_w_poly_degree_zero(ctx):
    assert w_poly(0, 0.1, 0.2, 0.3, 0.4, ctx) == 1


def test_w_poly_degree_one(ctx):
    a, b, u, v = 0.3 + 0.1j, -0.2, 0.5j, 0.6
    expected = v + (1 - a * v) * (1 - b * v) / (1 - a * b * u * v) * u
    assert close(w_poly(1, a, b, u, v, ctx), expected, rel=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_w_poly_with_b_zero_is_hahn(ctx, n):
    c, u, v = 0.4 - 0.3j, 0.2 + 0.5j, -0.6
    assert close(w_poly(n, c, 0.0, u, v, ctx), hahn_hom(n, c * v, u, v, ctx), rel=1e-12)


@settings(deadline=None, max_examples=40)
@given(n=degree, u=unit_complex, v=unit_complex, t=unit_complex, q=q_real)
def test_w_poly_homogeneous_when_a_b_vanish(n, u, v, t, q):
    ctx = QContext(q=q)
    left = w_poly(n, 0.0, 0.0, t * u, t * v, ctx)
    right = t ** n * w_poly(n, 0.0, 0.0, u, v, ctx)
    scale = abs(t) ** n * float(np.sum(np.abs(w_poly_terms(n, 0.0, 0.0, u, v, ctx))))
    assert abs(left - right) <= 1e-10 * scale + 1e-300


def test_w_poly_pole(ctx):
    with pytest.raises(PoleParameter):
        w_poly(2, 1.0, 1.0, 1.0, 1.0, ctx)


# -----------------------
# Cancellation
# -----------------------
def test_cancellation_ratio():
    assert cancellation_ratio(np.array([1.0, -1.0])) == 0.0
    assert cancellation_ratio(np.array([1.0, 2.0])) == 1.0
    assert cancellation_ratio(np.zeros(3)) == 1.0
