#!/usr/bin/env python3
"""
Exception hierarchy for the unidist engine

Every error carries the process exit code the command-line front end
reports for it.
"""

from typing import Optional


class UnidistError(Exception):
    """Base class for all engine errors"""
    exit_code = 1


class InputValidationError(UnidistError, ValueError):
    """Input data violates a documented clause"""
    exit_code = 2

    def __init__(self, message: str, clause: Optional[str] = None):
        super().__init__(message)
        self.clause = clause or message


class InvalidLabelError(InputValidationError):
    """A pattern label is not an edge at its step"""

    def __init__(self, message: str, step: int):
        super().__init__(message, clause=f"pattern step {step}")
        self.step = step


class PreconditionError(InputValidationError):
    """An operation was called outside its domain"""


class CapExceededError(UnidistError, RuntimeError):
    """A configured search cap was exceeded"""
    exit_code = 3

    def __init__(self, what: str, limit: int, actual: int):
        super().__init__(f"{what}: {actual} exceeds the configured cap {limit}")
        self.what = what
        self.limit = limit
        self.actual = actual


class InternalInvariantError(UnidistError, RuntimeError):
    """A proven structural property failed to hold"""
    exit_code = 1
