"""Exception hierarchy shared across the package."""


class CohomLabError(Exception):
    """Base class for all package errors."""


class DimensionError(CohomLabError, ValueError):
    """Vector or matrix shapes do not match the algebra."""


class DomainError(CohomLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(CohomLabError, ValueError):
    """A documented precondition of a construction is violated."""


class ConstructionError(CohomLabError, RuntimeError):
    """A builder could not produce an output satisfying its invariants."""


class BoundaryMismatchError(CohomLabError, ValueError):
    """Two profiles cannot be glued because their boundary data differ."""


class NonConstantRankError(CohomLabError, RuntimeError):
    """A quantity that must be constant over the identity component varied."""


class UnknownScenarioError(CohomLabError, KeyError):
    """Requested scenario is not in the registry."""
