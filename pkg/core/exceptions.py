"""Errors raised by the engine.

Management commands map these onto exit codes, so keep the hierarchy flat.
"""
from typing import Optional


class CatCIError(Exception):
    """Base class for engine errors"""


class DataError(CatCIError, ValueError):
    """The dataset (or the file it came from) is unusable"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SpecError(CatCIError, ValueError):
    """A test specification names bad or overlapping columns"""

    def __init__(
        self,
        message: str,
        index: Optional[int] = None,
        position: Optional[int] = None,
    ):
        if position is not None:
            message = f"spec #{position}: {message}"
        super().__init__(message)
        self.index = index
        self.position = position


class DegenerateTestError(CatCIError, ValueError):
    """The reference distribution has zero degrees of freedom"""
