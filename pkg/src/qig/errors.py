"""Exception types shared across the package."""


class QigError(Exception):
    """Base class for all package errors."""


class NotHermitian(QigError, ValueError):
    """Input matrix deviates from its adjoint beyond tolerance."""


class NoConvergence(QigError, RuntimeError):
    """Eigensolver sweep budget exhausted before reaching tolerance."""


class NegativeSpectrum(QigError, ValueError):
    """A matrix required to be positive semidefinite has an eigenvalue below the clamp."""


class DomainError(QigError, ValueError):
    """A scalar function was evaluated outside its domain."""


class NotInvertible(QigError, ValueError):
    """Operation requires a full-rank (faithful) density matrix."""


class BadParams(QigError, ValueError):
    """Parameter values outside the accepted range."""


class BadDim(QigError, ValueError):
    """Unsupported matrix dimension."""


class BadDims(QigError, ValueError):
    """Unsupported channel dimensions."""


class BadGrid(QigError, ValueError):
    """Scan grid outside the accepted parameter ranges."""


class NotTraceless(QigError, ValueError):
    """Input matrix has a nonzero trace where a traceless one is required."""


class DimMismatch(QigError, ValueError):
    """Operands have incompatible dimensions."""


class ChannelDimMismatch(DimMismatch):
    """Channel input dimension does not match the state it is applied to."""


class ProbeOutOfDomain(QigError, ValueError):
    """A finite-difference probe left the interior of the simplex."""
