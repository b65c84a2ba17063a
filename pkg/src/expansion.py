# src/expansion.py
"""
Expansion of bivariate series in homogeneous Hahn polynomials.

A grid f = sum lambda_{m,n} x^m y^n solves D_x f = D_y (1 - alpha eta_x) f
exactly when

    f(x, y) = sum_n lambda_n Phi_n^(alpha)(x, y|q),    lambda_n = lambda_{0,n},

and then row m of the grid is fixed by the x = 0 slice:

    lambda_{m,j} = (alpha;q)_m [j+m m] lambda_{j+m}.

The residual is checked on the whole rectangle. The returned expansion
stops at L = min(M, N), so every coefficient past anti-diagonal L must vanish.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from config import EXPANSION_TOL
from errors import GridInconsistent, NotInKernel
from observability import log
from operators import BivarSeries, qpde_residual_series
from polynomials import hahn_coeffs, hahn_hom
from qarith import PochhammerTable, QContext, check_finite, qbinom


@dataclass(frozen=True)
class HahnExpansion:
    alpha: complex
    lambdas: Tuple[complex, ...]

    @property
    def order(self) -> int:
        return len(self.lambdas) - 1


def _determined_limit(s: BivarSeries) -> int:
    big_m, big_n = s.trunc_orders
    return min(big_m, big_n)


def determined_residual(s: BivarSeries, alpha, q) -> float:
    """Max q-PDE residual over the whole rectangle m <= M-1, n <= N-1."""
    return qpde_residual_series(s, alpha, q)


def row_relation_grid(lambdas: Sequence, alpha, ctx: QContext, limit: int) -> np.ndarray:
    """Grid implied by the x = 0 slice: entry (m, j) = (alpha;q)_m [j+m m] lambda_{j+m}."""
    alpha_poch = PochhammerTable(alpha, ctx)
    grid = np.zeros((limit + 1, limit + 1), dtype=complex)
    for m in range(limit + 1):
        for j in range(limit + 1 - m):
            grid[m, j] = alpha_poch[m] * qbinom(j + m, m, ctx) * lambdas[j + m]
    return grid


def expand_in_hahn(s: BivarSeries, alpha, q, tol: float = EXPANSION_TOL) -> HahnExpansion:
    """Recover lambda_0 .. lambda_L, L = min(M, N), from a grid in the kernel of the q-PDE.

    Raises NotInKernel when the residual exceeds ``tol`` anywhere on the
    rectangle, and GridInconsistent when a row disagrees with the x = 0 slice
    on m + n <= L or when a coefficient past anti-diagonal L is nonzero (the
    returned expansion could not reproduce it).
    """
    ctx = QContext(q=q)
    alpha = complex(alpha)
    residual = determined_residual(s, alpha, ctx.q)
    if residual > tol:
        log("expansion", "debug", "grid_not_in_kernel", residual=residual, tol=tol)
        raise NotInKernel(residual, tol)

    limit = _determined_limit(s)
    lambdas = [complex(c) for c in s.coeffs[0, : limit + 1]]
    implied = row_relation_grid(lambdas, alpha, ctx, limit)
    rows, cols = s.coeffs.shape
    for m in range(rows):
        for j in range(cols):
            expected = implied[m, j] if m + j <= limit else 0j
            mismatch = abs(s.coeffs[m, j] - expected)
            if mismatch > tol:
                log("expansion", "debug", "grid_inconsistent", m=m, n=j, mismatch=mismatch)
                raise GridInconsistent(m, j, mismatch)
    return HahnExpansion(alpha, tuple(lambdas))


def eval_expansion(e: HahnExpansion, x, y, ctx: QContext) -> complex:
    value = 0j
    for n, lam in enumerate(e.lambdas):
        if lam:
            value += lam * hahn_hom(n, e.alpha, x, y, ctx)
    return check_finite(value, "Hahn expansion")


def synthesize_grid(lambdas: Sequence, alpha, ctx: QContext, shape=None) -> BivarSeries:
    """Coefficient grid of sum_n lambda_n Phi_n^(alpha)(x, y|q), cut to ``shape``."""
    order = len(lambdas) - 1
    rows, cols = shape if shape is not None else (order + 1, order + 1)
    grid = np.zeros((rows, cols), dtype=complex)
    for n, lam in enumerate(lambdas):
        if not lam:
            continue
        for k, coeff in enumerate(hahn_coeffs(n, alpha, ctx)):
            if k < rows and n - k < cols:
                grid[k, n - k] += lam * coeff
    return BivarSeries(grid)


def generating_lambdas(t, order: int, ctx: QContext) -> List[complex]:
    """t^n / (q;q)_n, the Hahn coefficients of (alpha x t;q)_inf / (xt, yt;q)_inf."""
    q_poch = PochhammerTable(ctx.q, ctx)
    t = complex(t)
    values = []
    power = 1 + 0j
    for n in range(order + 1):
        values.append(power / q_poch[n])
        power *= t
    return values


# -----------------------
# Grid files
# -----------------------
def _pair(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex entry must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(float(value))


def parse_grid(data) -> BivarSeries:
    """Accept {"M", "N", "coeffs"} or the flat form [M, N, [re, im], ...]."""
    if isinstance(data, dict):
        big_m, big_n, entries = data["M"], data["N"], data["coeffs"]
    elif isinstance(data, list) and len(data) >= 2:
        big_m, big_n, entries = data[0], data[1], data[2:]
    else:
        raise ValueError("grid must be an object or a flat array")
    big_m, big_n = int(big_m), int(big_n)
    if big_m < 0 or big_n < 0:
        raise ValueError("grid orders must be nonnegative")
    expected = (big_m + 1) * (big_n + 1)
    if len(entries) != expected:
        raise ValueError(f"grid needs {expected} coefficients, got {len(entries)}")
    coeffs = np.array([_pair(e) for e in entries], dtype=complex).reshape(big_m + 1, big_n + 1)
    return BivarSeries(coeffs)


def load_grid(path: Union[str, Path]) -> BivarSeries:
    with open(path, "r", encoding="utf-8") as f:
        return parse_grid(json.load(f))


def dump_grid(s: BivarSeries) -> dict:
    big_m, big_n = s.trunc_orders
    return {
        "M": big_m,
        "N": big_n,
        "coeffs": [[float(c.real), float(c.imag)] for c in s.coeffs.reshape(-1)],
    }
