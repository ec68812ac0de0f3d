"""Exception types raised across the package."""


class SpinTomoError(Exception):
    """Base class for package errors."""


class NormalizationError(SpinTomoError, ValueError):
    """A group element violates its normalization (unit norm, unitarity, det)."""


class InvalidStateError(SpinTomoError, ValueError):
    """A density matrix, Stokes vector or Gaussian state is not physical."""


class QuantumNumberError(SpinTomoError, ValueError):
    """Malformed angular-momentum quantum numbers."""


class QuadratureOrderError(SpinTomoError, ValueError):
    """The quadrature rule cannot integrate the requested band limit exactly."""


class RankDeficientError(SpinTomoError, ValueError):
    """A tomographic sample set is not informationally complete."""


class NumericalError(SpinTomoError, ArithmeticError):
    """Non-finite values or round-off outside the accepted tolerance."""


class CoverageError(SpinTomoError, LookupError):
    """Sampled tomogram data does not cover the nodes a rule needs."""
