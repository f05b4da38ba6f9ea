#!/usr/bin/env python3

"""
This module contains the exception types raised by fraglaw.
"""

class InvalidArgumentError(ValueError):
    """
    Raised when an argument violates the precondition of an operation, for example a non-finite log-length or a
    fixed proportion outside of (0, 1).
    """
    pass

class ConfigurationError(InvalidArgumentError):
    """
    Raised when a run configuration is malformed. The message always names the offending field.
    """

    def __init__(self, field: str, message: str) -> None:
        """
        Creates a new `ConfigurationError` object.

        Args:
            field: The dotted path of the offending field, for example `density.heights`.
            message: A description of the problem.
        """

        super().__init__("Invalid configuration field '{}': {}".format(field, message))
        self.field = field

class NumericFailure(ArithmeticError):
    """
    Raised when a numerical procedure cannot produce a trustworthy result: quadrature that does not reach its
    tolerance, non-finite intermediate values or a simulation exceeding its piece-count guard.
    """
    pass
