"""Exception types shared across the package.

Validation failures (bad arguments) and numerical failures (a computation
that cannot meet its contract) are kept separate so the CLI can map them
to distinct exit codes.
"""


class SphereigError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SphereigError):
    """Arguments outside the documented domain of an operation."""


class OddN(ValidationError):
    """Exact-distribution paths require even matrix size N."""


class OutOfRange(ValidationError):
    """Scalar argument outside its documented interval."""


class ParityError(ValidationError):
    """Real-eigenvalue count M must have the same parity as N."""


class NumericalError(SphereigError):
    """A numerical routine could not certify its accuracy contract."""


class NonConvergence(NumericalError):
    """Iteration or quadrature budget exhausted before reaching tolerance."""


class BadBracket(NumericalError):
    """Minimization bracket does not contain an interior minimum."""


class NoSignChange(NumericalError):
    """Root bracket endpoints have the same sign."""


class BracketExpansionFailed(NumericalError):
    """Outward bracket expansion found no sign change in the search range."""


class DecompositionFailure(NumericalError):
    """Orthogonal reduction of a matrix pencil did not converge."""
