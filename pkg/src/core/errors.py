"""
Error types

All library errors derive from AFCError, itself a ValueError, so callers that
only care about bad input can keep catching ValueError.
"""
from typing import List, Optional


class AFCError(ValueError):
    """Base class for every error raised by the simulator"""


class ConfigError(AFCError):
    """
    Configuration validation failure.

    Carries one message per problem, each already formatted as
    ``file:line: field: message`` when the source location is known.
    """

    def __init__(self, problems: List[str], source: Optional[str] = None):
        self.problems = list(problems)
        self.source = source
        super().__init__("\n".join(self.problems) or "invalid configuration")


class UnderResolvedError(AFCError):
    """Detuning grid too coarse for the requested feature"""


class AliasingError(AFCError):
    """Requested echo order wraps past the FFT time window"""


class GridRangeError(AFCError):
    """A frequency or parameter lies outside the available range"""


class RegimeError(AFCError):
    """Parameters outside the regime an operation is defined for"""


class CompileError(AFCError):
    """A pump target cannot be compiled for the given hardware"""

    def __init__(self, message: str, window: Optional[int] = None):
        self.window = window
        super().__init__(message)


class OutputError(AFCError):
    """An output file could not be written"""
