"""Exception hierarchy shared across the library.

``RegprodError`` is the common base.  ``DomainError`` covers bad mathematical
inputs caught up front (a pole, a parameter outside its range), while
``ComputationError`` covers failures detected during evaluation (a series that
will not converge, a certified bound that cannot be met within the term cap).
"""


class RegprodError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RegprodError, ValueError):
    """An input lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation was requested exactly at a pole of the function."""


class InvalidSequenceError(RegprodError, ValueError):
    """A sequence description is unusable (bad growth data, nonpositive
    terms, or a correction bound that the terms visibly violate)."""


class NonpositiveTermError(InvalidSequenceError):
    """A sequence term or correction factor is zero or negative."""


class BoundViolationError(InvalidSequenceError):
    """A probed correction factor falls outside its certified envelope."""


class ComputationError(RegprodError):
    """Base class for failures detected while evaluating a quantity."""


class NonconvergenceError(ComputationError):
    """An iteration or extrapolation shows no contraction."""


class ImpracticalPrecisionError(ComputationError):
    """Meeting the requested accuracy would exceed the configured term cap."""


class InsufficientTermsError(ComputationError):
    """A finite term table ran out before the certified cutoff was reached."""


class BranchConsistencyError(ComputationError):
    """A complex intermediate landed where the principal branch is ambiguous,
    or a residual imaginary part exceeded its certified bound."""


class RouteDisagreementError(ComputationError):
    """Two routes that must agree produced values outside combined bounds."""


class RouteInapplicableError(DomainError):
    """The requested evaluation route does not apply to this sequence."""


class SpecFileError(RegprodError):
    """A sequence description file failed to parse or validate.

    Carries the offending path and a 1-based line number (0 when the problem
    is not tied to a single line).
    """

    def __init__(self, path: str, lineno: int, message: str):
        self.path = path
        self.lineno = lineno
        self.message = message
        super().__init__(f"{path}:{lineno}: {message}" if lineno else f"{path}: {message}")
