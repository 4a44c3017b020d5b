"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SumsetLabError(Exception):
    """Base class for all library errors."""


class ContractViolation(SumsetLabError, ValueError):
    """An argument broke a structural contract (mismatched bounds, groups, ...)."""


class PreconditionError(ContractViolation):
    """An operation was called outside its documented precondition."""


class RangeError(PreconditionError):
    """A numeric argument fell outside its permitted range."""


class ResourceError(SumsetLabError, RuntimeError):
    """A computation was refused because it would exceed a configured budget."""

    def __init__(self, message: str, requested: int | None = None, limit: int | None = None):
        super().__init__(message)
        self.requested = requested
        self.limit = limit


class ParseError(ContractViolation):
    """A text encoding could not be decoded."""
