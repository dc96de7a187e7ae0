"""Shared exception types."""


class ConvergenceError(ArithmeticError):
    """A truncated series or quadrature failed its own convergence test."""


class TruncationError(ConvergenceError):
    """A series truncation order is too small for the requested tolerance."""
