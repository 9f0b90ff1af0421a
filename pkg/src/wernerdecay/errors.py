"""Exception types shared across the package."""


class WernerDecayError(Exception):
    """Base class for all package-specific errors."""


class ValidationFailure(WernerDecayError):
    """A matrix violated a density-matrix invariant.

    ``defect`` carries the size of the violation (e.g. the worst offending
    eigenvalue, or the deviation of the trace from one).
    """

    def __init__(self, message: str, defect: float = 0.0):
        super().__init__(message)
        self.defect = float(defect)


class NotHermitian(ValidationFailure):
    """Hermiticity check failed beyond tolerance."""


class TraceNotOne(ValidationFailure):
    """Trace differs from 1 beyond tolerance."""


class NotPSD(ValidationFailure):
    """A negative eigenvalue beyond tolerance was found."""


class NegativeEigenvalue(ValidationFailure):
    """A matrix expected to be positive semidefinite is not."""


class NoConvergence(WernerDecayError):
    """The eigensolver iteration failed to converge."""


class Unsupported(WernerDecayError):
    """No closed-form decay law exists for the requested parameters."""


class OutOfDomain(WernerDecayError):
    """Parameters are outside the validity range of a series expansion."""


class NotPositiveAtStart(WernerDecayError):
    """Vanishing-time search requires a measure that starts positive."""


class ConfigError(WernerDecayError):
    """Inconsistent or incomplete command-line configuration."""
