# src/errors.py
"""Exception hierarchy shared by every numerical module and the CLI."""


class QCalcError(Exception):
    """Base class for all library errors."""


class InvalidContext(QCalcError, ValueError):
    """QContext constructed with |q| >= 1 or a non-positive policy value."""


class PoleParameter(QCalcError, ZeroDivisionError):
    """A denominator factor vanished (modulus below the pole threshold)."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class NonConvergence(QCalcError):
    """A truncated sum, product or quadrature did not meet its target."""

    def __init__(self, message, err_est=None, terms_used=None):
        super().__init__(message)
        self.err_est = err_est
        self.terms_used = terms_used


class DomainError(QCalcError, ValueError):
    """Argument outside the domain of a pointwise operator."""


class NotInKernel(QCalcError):
    """Grid does not satisfy the q-partial differential equation."""

    def __init__(self, residual, tol):
        super().__init__(f"q-PDE residual {residual:.3e} exceeds tolerance {tol:.1e}")
        self.residual = residual
        self.tol = tol


class GridInconsistent(QCalcError):
    """Row relation between grid rows and the x=0 slice failed."""

    def __init__(self, m, n, mismatch):
        super().__init__(f"row relation fails at (m={m}, n={n}): mismatch {mismatch:.3e}")
        self.m = m
        self.n = n
        self.mismatch = mismatch


class SamplingExhausted(QCalcError):
    def __init__(self, identity_id, attempts):
        super().__init__(f"{identity_id}: no valid sample after {attempts} draws")
        self.identity_id = identity_id
        self.attempts = attempts


class UnknownIdentity(QCalcError, KeyError):
    def __str__(self):
        return f"unknown identity: {self.args[0]}"
