"""Exceptions raised by the extremal index library.

Every failure derives from ExtremalError and carries the process exit code
the command line maps it to.
"""


class ExtremalError(Exception):
    """Base class for all library errors"""
    exit_code = 1


class ConfigurationError(ExtremalError):
    """Invalid study configuration or settings"""
    exit_code = 2


class DomainError(ExtremalError):
    """Argument outside the domain of an operation"""
    exit_code = 2


class WindowError(DomainError):
    """Diagnostic window r_n shorter than the cycle order k"""


class DataError(ExtremalError):
    """Malformed input file; the message names the offending row"""
    exit_code = 3


class DegenerateError(ExtremalError):
    """Numerically degenerate estimate (zero denominator, log of 0, ...)"""
    exit_code = 4


class InsufficientDataError(DegenerateError):
    """Too few observations for the requested statistic"""


class InsufficientExceedancesError(DegenerateError):
    """Fewer exceedances of the level than the estimator needs"""

    def __init__(self, n_exceedances, required, message=None):
        self.n_exceedances = n_exceedances
        self.required = required
        super().__init__(
            message or f'{n_exceedances} exceedance(s) found, at least {required} required'
        )


class NoExceedancesError(InsufficientExceedancesError):
    """The level is never exceeded"""

    def __init__(self, level=None):
        self.level = level
        message = 'No exceedances of the level' if level is None else f'No exceedances of level {level:.6g}'
        super().__init__(0, 1, message)
