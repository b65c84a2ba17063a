# src/polynomials.py
"""
Hahn-family polynomials.

    Phi_n^(alpha)(x|q)    = sum_k [n k] (alpha;q)_k x^k
    Phi_n^(alpha)(x, y|q) = sum_k [n k] (alpha;q)_k x^k y^(n-k)
    h_n(x, y|q)           = Phi_n^(0)(x, y|q)
    W_n(a, b, u, v|q)     = sum_j [n j] (av, bv;q)_j / (abuv;q)_j u^j v^(n-j)

All evaluations are O(n) with the q-binomial and Pochhammer factors
updated incrementally.
"""

from typing import List

import numpy as np

from config import POLE_THRESHOLD
from errors import PoleParameter
from qarith import QContext, check_finite


def power_vector(x, n: int) -> np.ndarray:
    """[1, x, ..., x^n] by repeated multiplication (0^0 = 1)."""
    values = np.full(n + 1, complex(x), dtype=complex)
    values[0] = 1.0
    return np.cumprod(values)


def hahn_coeffs(n: int, alpha, ctx: QContext) -> List[complex]:
    """Coefficients [n k] (alpha;q)_k of x^k y^(n-k), k = 0..n."""
    p = ctx.powers(n + 1)
    alpha = complex(alpha)
    coeffs = []
    binom = 1 + 0j
    poch = 1 + 0j
    for k in range(n + 1):
        coeffs.append(binom * poch)
        if k == n:
            break
        binom *= (1.0 - p[n - k]) / (1.0 - p[k + 1])
        poch *= 1.0 - alpha * p[k]
    return coeffs


def hahn_hom_terms(n: int, alpha, x, y, ctx: QContext) -> np.ndarray:
    """The n+1 summands of Phi_n^(alpha)(x, y|q)."""
    coeffs = np.array(hahn_coeffs(n, alpha, ctx), dtype=complex)
    return coeffs * power_vector(x, n) * power_vector(y, n)[::-1]


def hahn_hom(n: int, alpha, x, y, ctx: QContext) -> complex:
    """Homogeneous Hahn polynomial Phi_n^(alpha)(x, y|q)."""
    value = complex(np.sum(hahn_hom_terms(n, alpha, x, y, ctx)))
    return check_finite(value, "homogeneous Hahn polynomial")


def hahn(n: int, alpha, x, ctx: QContext) -> complex:
    """Hahn polynomial Phi_n^(alpha)(x|q) = Phi_n^(alpha)(x, 1|q)."""
    return hahn_hom(n, alpha, x, 1.0, ctx)


def rogers_szego(n: int, x, y, ctx: QContext) -> complex:
    """Homogeneous Rogers-Szego polynomial h_n(x, y|q)."""
    return hahn_hom(n, 0.0, x, y, ctx)


def w_poly_terms(n: int, a, b, u, v, ctx: QContext) -> np.ndarray:
    """The n+1 summands of W_n(a, b, u, v|q)."""
    p = ctx.powers(n + 1)
    a, b, u, v = (complex(z) for z in (a, b, u, v))
    av, bv, abuv = a * v, b * v, a * b * u * v
    u_pow = power_vector(u, n)
    v_pow = power_vector(v, n)
    terms = np.empty(n + 1, dtype=complex)
    coeff = 1 + 0j
    for j in range(n + 1):
        terms[j] = coeff * u_pow[j] * v_pow[n - j]
        if j == n:
            break
        den = 1.0 - abuv * p[j]
        if abs(den) < POLE_THRESHOLD:
            raise PoleParameter(f"(abuv;q)_{j + 1} vanishes for abuv={abuv}", factor=den)
        coeff *= (1.0 - p[n - j]) / (1.0 - p[j + 1])
        coeff *= (1.0 - av * p[j]) * (1.0 - bv * p[j]) / den
    return terms


def w_poly(n: int, a, b, u, v, ctx: QContext) -> complex:
    """W_n(a, b, u, v|q)."""
    return check_finite(complex(np.sum(w_poly_terms(n, a, b, u, v, ctx))), "W polynomial")


def cancellation_ratio(terms: np.ndarray) -> float:
    """|sum| / sum|.|; 1 means no cancellation, 0 means total."""
    scale = float(np.sum(np.abs(terms)))
    if scale == 0.0:
        return 1.0
    return abs(complex(np.sum(terms))) / scale
