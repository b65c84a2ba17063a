# src/operators.py
"""
q-derivative, q-partial derivatives and the q-shift operator.

Pointwise forms act on black-box callables; series forms act exactly on
truncated coefficient arrays:

    D_q x^k = (1 - q^k) x^(k-1)        eta_x x^m y^n = q^m x^m y^n
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from errors import DomainError
from polynomials import power_vector


@dataclass(frozen=True)
class UniSeries:
    """coeffs[k] is the coefficient of x^k; an empty array is the zero series."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).reshape(-1))

    @property
    def trunc_order(self) -> int:
        return self.coeffs.size - 1

    def evaluate(self, x) -> complex:
        if self.coeffs.size == 0:
            return 0j
        return complex(np.dot(self.coeffs, power_vector(x, self.trunc_order)))

    @classmethod
    def monomial(cls, k: int) -> "UniSeries":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = 1.0
        return cls(coeffs)


@dataclass(frozen=True)
class BivarSeries:
    """coeffs[m, n] is the coefficient of x^m y^n."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 2:
            raise ValueError(f"coefficient grid must be 2-D, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficient grid has non-finite entries")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def trunc_orders(self):
        m, n = self.coeffs.shape
        return m - 1, n - 1

    def evaluate(self, x, y) -> complex:
        if self.coeffs.size == 0:
            return 0j
        big_m, big_n = self.trunc_orders
        return complex(power_vector(x, big_m) @ self.coeffs @ power_vector(y, big_n))

    def evaluate_abs(self, x, y) -> float:
        """sum |c_mn| |x|^m |y|^n, the scale against which evaluate() cancels."""
        if self.coeffs.size == 0:
            return 0.0
        big_m, big_n = self.trunc_orders
        return float(power_vector(abs(x), big_m).real @ np.abs(self.coeffs) @ power_vector(abs(y), big_n).real)

    def __add__(self, other: "BivarSeries") -> "BivarSeries":
        return BivarSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: "BivarSeries") -> "BivarSeries":
        return BivarSeries(self.coeffs - other.coeffs)

    def scale(self, factor) -> "BivarSeries":
        return BivarSeries(self.coeffs * complex(factor))

    @classmethod
    def monomial(cls, m: int, n: int, shape=None) -> "BivarSeries":
        rows, cols = shape if shape is not None else (m + 1, n + 1)
        coeffs = np.zeros((rows, cols), dtype=complex)
        coeffs[m, n] = 1.0
        return cls(coeffs)


def _derivative_factors(q, count: int) -> np.ndarray:
    # (1 - q^k) for k = 1..count
    return 1.0 - np.power(complex(q), np.arange(1, count + 1, dtype=float))


# -----------------------
# Pointwise forms
# -----------------------
def qderiv_point(f: Callable, x, q) -> complex:
    """(f(x) - f(qx)) / x."""
    x = complex(x)
    if abs(x) < 1e-14:
        raise DomainError("pointwise q-derivative is singular at x = 0; use the series form")
    return (f(x) - f(complex(q) * x)) / x


def qpde_residual_point(f: Callable, x, y, alpha, q) -> complex:
    """D_x f - D_y (f - alpha f(qx, .)) at (x, y) for a bivariate callable."""
    q = complex(q)
    alpha = complex(alpha)
    lhs = qderiv_point(lambda s: f(s, y), x, q)
    rhs = qderiv_point(lambda t: f(x, t) - alpha * f(q * x, t), y, q)
    return lhs - rhs


# -----------------------
# Series forms
# -----------------------
def qderiv_series(s: UniSeries, q) -> UniSeries:
    """Termwise D_q: coefficient k-1 of the result is c_k (1 - q^k)."""
    order = s.trunc_order
    if order <= 0:
        return UniSeries(np.zeros(0, dtype=complex))
    return UniSeries(s.coeffs[1:] * _derivative_factors(q, order))


def qderiv_series_iter(s: UniSeries, q, m: int) -> UniSeries:
    for _ in range(m):
        s = qderiv_series(s, q)
    return s


def qpartial_x(s: BivarSeries, q) -> BivarSeries:
    big_m, big_n = s.trunc_orders
    if big_m <= 0:
        return BivarSeries(np.zeros((0, big_n + 1), dtype=complex))
    return BivarSeries(s.coeffs[1:, :] * _derivative_factors(q, big_m)[:, None])


def qpartial_y(s: BivarSeries, q) -> BivarSeries:
    big_m, big_n = s.trunc_orders
    if big_n <= 0:
        return BivarSeries(np.zeros((big_m + 1, 0), dtype=complex))
    return BivarSeries(s.coeffs[:, 1:] * _derivative_factors(q, big_n)[None, :])


def qshift_x(s: BivarSeries, q) -> BivarSeries:
    """eta_x: coefficient (m, n) times q^m."""
    big_m, _ = s.trunc_orders
    factors = np.power(complex(q), np.arange(big_m + 1, dtype=float))
    return BivarSeries(s.coeffs * factors[:, None])


def qpde_sides(s: BivarSeries, alpha, q):
    """(D_x f, D_y (1 - alpha eta_x) f) as grids of equal shape (M, N)."""
    big_m, big_n = s.trunc_orders
    lhs = qpartial_x(s, q).coeffs[:, :big_n]
    shifted = s - qshift_x(s, q).scale(alpha)
    rhs = qpartial_y(shifted, q).coeffs[:big_m, :]
    return BivarSeries(lhs), BivarSeries(rhs)


def qpde_residual_grid(s: BivarSeries, alpha, q) -> np.ndarray:
    """Residual coefficients on m <= M-1, n <= N-1."""
    lhs, rhs = qpde_sides(s, alpha, q)
    return lhs.coeffs - rhs.coeffs


def qpde_residual_series(s: BivarSeries, alpha, q) -> float:
    """Max absolute residual coefficient of D_x f - D_y (1 - alpha eta_x) f."""
    residual = qpde_residual_grid(s, alpha, q)
    if residual.size == 0:
        return 0.0
    return float(np.max(np.abs(residual)))


def coefficient_scale(s: BivarSeries) -> float:
    """Max input coefficient magnitude, for turning residuals into relative figures."""
    return float(np.max(np.abs(s.coeffs))) if s.coeffs.size else 0.0
