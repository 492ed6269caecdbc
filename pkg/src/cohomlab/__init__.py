"""Curvature experiments on cohomogeneity-one metrics, Cheeger deformations and biquotients."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BoundaryMismatchError,
    CohomLabError,
    ConstructionError,
    DimensionError,
    DomainError,
    NonConstantRankError,
    PreconditionError,
    UnknownScenarioError,
)
from .kernels import BACKEND  # noqa: F401
