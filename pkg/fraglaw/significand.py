#!/usr/bin/env python3

"""
This module contains the significand primitives, the Benford reference distribution and the P_N(s) statistic.

All piece lengths are carried as base-10 logarithms. A stick cut thirty times at proportion 0.1 has length 1e-30, and
products of thousands of proportions underflow a double long before their significands stop being meaningful, so
linear-domain lengths are only materialised for display and for conservation checks.
"""

import math
from typing import Optional, Sequence, Union

import numpy as np

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError

ArrayLike = Union[Sequence[float], np.ndarray]

class LogLength:
    """
    The base-10 logarithm of a positive (dimensionless) length.
    """

    def __init__(self, log10_value: float) -> None:
        """
        Creates a new `LogLength` object.

        Args:
            log10_value: The base-10 logarithm of the length.

        Raises:
            InvalidArgumentError: If `log10_value` is not finite.
        """

        value = float(log10_value)
        if not math.isfinite(value):
            raise InvalidArgumentError("A log-length must be finite, got {}.".format(log10_value))

        self._log10_value = value

    @staticmethod
    def from_length(length: float) -> "LogLength":
        """
        Creates a `LogLength` from a positive linear-domain length.
        """

        if not length > 0:
            raise InvalidArgumentError("A length must be positive, got {}.".format(length))

        return LogLength(math.log10(length))

    @property
    def log10_value(self) -> float:
        """
        The base-10 logarithm of the length.
        """

        return self._log10_value

    def length(self) -> float:
        """
        Returns the linear-domain length. Values below the double range underflow to zero.
        """

        return 10.0 ** self._log10_value

    def __repr__(self) -> str:
        return "LogLength({!r})".format(self._log10_value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogLength):
            return NotImplemented

        return self._log10_value == other._log10_value

    def __hash__(self) -> int:
        return hash(self._log10_value)

def _check_base(base: int) -> None:
    if base < 2:
        raise InvalidArgumentError("The base must be at least 2, got {}.".format(base))

def _as_log10(log_length: Union[LogLength, float]) -> float:
    if isinstance(log_length, LogLength):
        return log_length.log10_value

    value = float(log_length)
    if not math.isfinite(value):
        raise InvalidArgumentError("A log-length must be finite, got {}.".format(log_length))

    return value

def significand(log_length: Union[LogLength, float], base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns the significand S_B(x) in [1, B) of the length x whose base-10 logarithm is given.

    Args:
        log_length: The base-10 logarithm of x, either as a `LogLength` or as a float.
        base: The base B.

    Returns:
        The significand of x in base `base`.

    Raises:
        InvalidArgumentError: If the log-length is not finite or `base` is smaller than 2.
    """

    _check_base(base)
    value = _as_log10(log_length)

    if base != 10:
        value = value / math.log10(base)

    fractional_part = value - math.floor(value)
    result = float(base) ** fractional_part

    # Rounding in the exponentiation may land exactly on the base.
    return result if result < base else math.nextafter(float(base), 0.0)

def significands(log10_values: ArrayLike, base: int = fraglaw.defaults.BASE) -> np.ndarray:
    """
    Vectorised version of `significand` for an array of base-10 logarithms.
    """

    _check_base(base)
    values = np.asarray(log10_values, dtype=np.float64)

    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("All log-lengths must be finite.")

    if base != 10:
        values = values / math.log10(base)

    fractional_parts = values - np.floor(values)
    result = np.power(float(base), fractional_parts)

    return np.minimum(result, np.nextafter(float(base), 0.0))

def first_digits(log10_values: ArrayLike) -> np.ndarray:
    """
    Returns the leading decimal digits (1..9) of the lengths whose base-10 logarithms are given.
    """

    return np.clip(np.floor(significands(log10_values)).astype(np.int64), 1, 9)

def benford_digit_probabilities(base: int = fraglaw.defaults.BASE) -> np.ndarray:
    """
    Returns the Benford probabilities log_B(1 + 1/d) of the leading digits d = 1, ..., B - 1.
    """

    _check_base(base)
    digits = np.arange(1, base, dtype=np.float64)

    return np.log1p(1.0 / digits) / math.log(base)

def benford_cdf(s: float, base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns the Benford probability Prob(S_B(x) <= s) = log_B(s).

    Args:
        s: The significand threshold, in [1, base].
        base: The base B.

    Raises:
        InvalidArgumentError: If `s` is outside of [1, base].
    """

    _check_base(base)
    if not 1.0 <= s <= base:
        raise InvalidArgumentError("The significand threshold must lie in [1, {}], got {}.".format(base, s))

    return math.log(s) / math.log(base)

class BenfordReference:
    """
    The Benford distribution of the leading digits in a given base.
    """

    def __init__(self, base: int = fraglaw.defaults.BASE) -> None:
        _check_base(base)
        self._base = base

    @property
    def base(self) -> int:
        """
        The base of the digit expansion.
        """

        return self._base

    def probabilities(self) -> np.ndarray:
        """
        Returns the leading digit probabilities for the digits 1, ..., B - 1.
        """

        return benford_digit_probabilities(self._base)

    def cdf(self, s: float) -> float:
        """
        Returns Prob(S_B(x) <= s).
        """

        return benford_cdf(s, self._base)

def _check_threshold(s: float) -> None:
    if not 1.0 <= s < 10.0:
        raise InvalidArgumentError("The significand threshold s must lie in [1, 10), got {}.".format(s))

def phi_s(log_length: Union[LogLength, float], s: float) -> int:
    """
    The significand indicator function: 1 if the significand of the length is at most `s`, 0 otherwise.

    Args:
        log_length: The base-10 logarithm of the length.
        s: The threshold, in [1, 10).
    """

    _check_threshold(s)
    return 1 if significand(log_length) <= s else 0

def piece_weights(values: np.ndarray, weights: Optional[ArrayLike]) -> np.ndarray:
    """
    Validates the weights of a piece collection, returning unit weights if `weights` is `None`.
    """

    if values.size == 0:
        raise InvalidArgumentError("The piece collection is empty.")

    if weights is None:
        return np.ones(values.shape, dtype=np.float64)

    weight_array = np.asarray(weights, dtype=np.float64)
    if weight_array.shape != values.shape:
        raise InvalidArgumentError("Got {} weights for {} pieces.".format(weight_array.size, values.size))

    if np.any(weight_array < 0) or not np.all(np.isfinite(weight_array)):
        raise InvalidArgumentError("Piece weights must be finite and nonnegative.")

    if not weight_array.sum() > 0:
        raise InvalidArgumentError("The total weight of the pieces must be positive.")

    return weight_array

def empirical_pn(log10_values: ArrayLike, s: float, weights: Optional[ArrayLike] = None) -> float:
    """
    Returns P_N(s), the weighted proportion of pieces whose significand is at most `s`.

    Args:
        log10_values: The base-10 logarithms of the piece lengths.
        s: The threshold, in [1, 10).
        weights: The piece weights (multiplicities); all pieces weigh 1 if omitted.

    Raises:
        InvalidArgumentError: If the collection is empty or has zero total weight.
    """

    _check_threshold(s)
    values = np.asarray(log10_values, dtype=np.float64)
    weight_array = piece_weights(values, weights)

    below = significands(values) <= s

    return float(np.sum(weight_array[below]) / np.sum(weight_array))
