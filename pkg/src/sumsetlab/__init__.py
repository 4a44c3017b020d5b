"""Exact sumset arithmetic, densities, the Dyson transform and e-transform, with exhaustive theorem checkers."""

from .errors import ContractViolation, ParseError, PreconditionError, RangeError, ResourceError, SumsetLabError

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "ParseError",
    "PreconditionError",
    "RangeError",
    "ResourceError",
    "SumsetLabError",
]
