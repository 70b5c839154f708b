"""Exception hierarchy.

Two branches: `ValidationError` for inputs rejected before any numerics run
(a CLI maps these to exit code 2), `NumericalError` for contracts that fail
at run time (exit code 3).
"""


class ZenonError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ZenonError):
    """Input rejected before any numerics ran."""


class NumericalError(ZenonError):
    """A numerical contract failed at run time."""


class NotHermitianError(ValidationError):
    """Matrix required to be Hermitian is not, beyond tolerance."""


class NotPSDError(NumericalError):
    """Matrix required to be positive semidefinite has a negative eigenvalue."""


class BadDimensionError(ValidationError):
    """Matrix or vector has an incompatible shape for the requested operation."""


class SiteOutOfRangeError(ValidationError):
    """Qubit site index outside 1..n_qubits."""


class NotBlockDiagonalError(ValidationError):
    """Matrix does not decompose into the two parity blocks."""


class StepTooLargeError(ValidationError):
    """Integrator step violates its stability precondition."""


class ProbabilityUnderflowError(NumericalError):
    """Survival probability fell below the representable floor."""


class ZeroAntiHermitianPartError(ValidationError):
    """Operation needs a non-Hermitian input but the anti-Hermitian part vanishes."""


class RoundTripFailureError(NumericalError):
    """Dilation round trip did not reproduce the input within tolerance."""


class StroboscopicRegimeWarning(UserWarning):
    """The chosen time step is too coarse for the stroboscopic limit to be trusted."""
