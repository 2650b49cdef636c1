"""Exception hierarchy shared across the package."""


class CfOracleError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CfOracleError):
    """An object violates one of its declared invariants."""


class DomainError(CfOracleError):
    """A value lies outside the variable range of the model at hand."""


class ContractViolationError(CfOracleError):
    """An operation was called with arguments that break its contract."""


class UndefinedConditionalError(CfOracleError):
    """Conditioning on evidence that has probability zero."""


class EnumerationCapError(CfOracleError):
    """A full function-table enumeration would exceed the configured cap."""


class ExtractionError(CfOracleError):
    """A density-matrix element cannot be converted into a joint probability
    (zero amplitude at one of the requested inputs, or a non-physical value)."""


class MeasurementInconsistencyError(CfOracleError):
    """Measured statistics admit no valid probability distribution."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class InfeasibleSystemError(CfOracleError):
    """The affine constraint system has no nonnegative solution.

    Carries a Farkas-style certificate: a row multiplier vector ``y`` with
    ``y . b > 0`` while every column satisfies ``y . A_j <= 0``.
    """

    def __init__(self, message: str, residual=None, certificate=None):
        super().__init__(message)
        self.residual = residual
        self.certificate = certificate


class UnboundedProgramError(CfOracleError):
    """The linear program is unbounded in the requested direction."""


class UnsupportedTableError(CfOracleError):
    """The operation is only defined for binary function tables."""
