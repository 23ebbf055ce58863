"""Exception taxonomy.

Two families matter to callers: input-contract violations derive from
ValueError (the CLI maps them to exit code 1) and numerical failures derive
from NumericalError (exit code 2).  Anything raised by the OS during file
handling stays an OSError.
"""


class NotSquareError(ValueError):
    """Matrix argument must be square."""


class NotHermitianError(ValueError):
    """Matrix asymmetry exceeds the Hermitian tolerance."""


class NonFiniteError(ValueError):
    """Input contains NaN or infinite entries."""


class ZeroMatrixError(ValueError):
    """Matrix is identically zero where a nonzero one is required."""


class DimensionMismatchError(ValueError):
    """Operand shapes are incompatible."""


class IndexOutOfRangeError(IndexError):
    """Eigenvalue selection index outside the valid range."""


class BadParamsError(ValueError):
    """Invalid configuration or kernel parameters."""


class NonPositiveWeightError(ValueError):
    """Weighted least squares requires strictly positive weights."""


class PairSplitError(ValueError):
    """Selection separates the two members of a complex-conjugate pair."""


class TooFewSnapshotsError(ValueError):
    """Operation needs more snapshot columns than were supplied."""


class ObservableMismatchError(ValueError):
    """Model observables do not match what the operation requires."""


class InsufficientDataError(ValueError):
    """Trajectory too short for the requested window/step layout."""


class ParseError(ValueError):
    """Snapshot file is malformed."""


class NumericalError(RuntimeError):
    """Base class for runtime numerical failures."""


class ConvergenceError(NumericalError):
    """QR iteration exceeded its sweep budget."""


class IllConditionedSwapError(NumericalError):
    """Sylvester system of an adjacent block swap is singular to working
    precision; the requested reordering would separate nearly identical
    eigenvalues."""


class RankCollapseError(NumericalError):
    """Truncation removed every singular value."""


class SingularSystemError(NumericalError):
    """Least-squares system matrix is rank deficient beyond tolerance."""


class DiagonalizationError(NumericalError):
    """Eigensolver failed to converge."""
