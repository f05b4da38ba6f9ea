#!/usr/bin/env python3

"""
This module contains the goodness-of-fit and equidistribution measurements: the chi-square statistic against
Benford's law, sup-norm distances of significand distributions and of fractional parts, and the mean and variance
of P_N(s) across independent trials.
"""

import io
import math
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import chi2

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError
from fraglaw.histogram import DigitHistogram, first_digit_histogram
from fraglaw.significand import ArrayLike, benford_digit_probabilities, piece_weights, significands

# Largest natural logarithm whose exponential is a finite float.
MAX_LOG_FLOAT: float = math.log(sys.float_info.max)

class GofReport:
    """
    The goodness-of-fit summary of a first-digit histogram against Benford's law.

    The statistic is also kept as its natural logarithm and the verdict is taken on it. Exact spectra stand for up
    to 2^(10^6) pieces, and their statistic need not fit in a float.
    """

    def __init__(self,
                 chi_square: float,
                 dof: int,
                 max_digit_deviation: float,
                 ks_distance: float,
                 n_pieces: float,
                 log_chi_square: Optional[float] = None) -> None:
        """
        Creates a new `GofReport` object.

        Args:
            chi_square: The chi-square statistic; `math.inf` if it overflows a float.
            dof: The degrees of freedom of the reference distribution.
            max_digit_deviation: The largest difference between a digit frequency and its Benford probability.
            ks_distance: The sup-norm distance between the significand distribution and log10(s).
            n_pieces: The number of pieces (total weight) the statistic was scaled with; `math.inf` if it overflows.
            log_chi_square: The natural logarithm of the statistic; computed from `chi_square` if omitted.
        """

        if not chi_square >= 0.0:
            raise InvalidArgumentError("A chi-square value must be nonnegative, got {}.".format(chi_square))

        if not 0.0 <= ks_distance <= 1.0:
            raise InvalidArgumentError("A KS distance must lie in [0, 1], got {}.".format(ks_distance))

        if log_chi_square is None:
            log_chi_square = math.log(chi_square) if chi_square > 0.0 else -math.inf

        self._chi_square = float(chi_square)
        self._dof = dof
        self._max_digit_deviation = float(max_digit_deviation)
        self._ks_distance = float(ks_distance)
        self._n_pieces = float(n_pieces)
        self._log_chi_square = float(log_chi_square)

    @property
    def chi_square(self) -> float:
        """
        The chi-square statistic.
        """

        return self._chi_square

    @property
    def log_chi_square(self) -> float:
        """
        The natural logarithm of the chi-square statistic; -inf for a perfect fit.
        """

        return self._log_chi_square

    @property
    def dof(self) -> int:
        """
        The degrees of freedom; 8 for first digits.
        """

        return self._dof

    @property
    def max_digit_deviation(self) -> float:
        """
        The largest absolute deviation of a digit frequency from Benford.
        """

        return self._max_digit_deviation

    @property
    def ks_distance(self) -> float:
        """
        The sup-norm distance to the Benford significand distribution.
        """

        return self._ks_distance

    @property
    def n_pieces(self) -> float:
        """
        The number of pieces the chi-square value was computed for.
        """

        return self._n_pieces

    def critical_value(self) -> float:
        """
        The 95% quantile of the chi-square distribution with `dof` degrees of freedom.
        """

        return chi_square_critical_value(self._dof)

    def exceeds_critical_value(self) -> bool:
        """
        Whether the chi-square value exceeds the 95% critical value of its reference distribution.
        """

        return self._log_chi_square > math.log(self.critical_value())

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the JSON representation of the report. Values that do not fit in a float are written as null; the
        logarithm of the statistic is always present when it is finite.
        """

        return {"chi_square": _finite_or_none(self._chi_square),
                "log_chi_square": _finite_or_none(self._log_chi_square),
                "dof": self._dof,
                "max_digit_deviation": self._max_digit_deviation,
                "ks_distance": self._ks_distance,
                "n_pieces": _finite_or_none(self._n_pieces),
                "exceeds_critical_value": self.exceeds_critical_value()}

    def __repr__(self) -> str:
        return "GofReport(chi_square={!r}, ks_distance={!r})".format(self._chi_square, self._ks_distance)

def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None

def _exp_or_inf(log_value: float) -> float:
    return math.exp(log_value) if log_value < MAX_LOG_FLOAT else math.inf

def chi_square_critical_value(dof: int = fraglaw.defaults.CHI_SQUARE_DOF,
                              level: float = fraglaw.defaults.CHI_SQUARE_LEVEL) -> float:
    """
    Returns the `level` quantile of the chi-square distribution with `dof` degrees of freedom (15.507 for the
    default 95% and 8 degrees of freedom).
    """

    return float(chi2.ppf(level, dof))

def _integer_cdf_grid(histogram: DigitHistogram) -> List[Tuple[float, float]]:
    cumulative = np.cumsum(histogram.proportions())
    return [(float(digit + 2), float(cumulative[digit])) for digit in range(9)]

def _grid_distance(grid: Sequence[Tuple[float, float]]) -> float:
    distance = 0.0
    for (s, probability) in grid:
        distance = max(distance, abs(probability - math.log10(min(s, 10.0))))

    return min(distance, 1.0)

def ks_distance_benford(data: Union[DigitHistogram, ArrayLike],
                        weights: Optional[ArrayLike] = None) -> float:
    """
    Returns the sup over s in [1, 10] of |P_N(s) - log10(s)|.

    Args:
        data: Either a `DigitHistogram`, whose tabulated grid is used (the integer points s = 2, ..., 10 if it has
            none), or the base-10 logarithms of the pieces. Unweighted pieces are swept exactly in sorted order;
            weighted pieces are tabulated on a 101-point grid.
        weights: The piece weights, only with piece data.

    Returns:
        The distance, in [0, 1].

    Raises:
        InvalidArgumentError: If there is no data.
    """

    if isinstance(data, DigitHistogram):
        if data.cdf_grid is not None:
            return _grid_distance(data.pn_values())

        return _grid_distance(_integer_cdf_grid(data))

    values = np.asarray(data, dtype=np.float64)
    if values.size == 0:
        raise InvalidArgumentError("Cannot compute a distance for an empty piece collection.")

    if weights is None:
        positions = np.sort(np.log10(significands(values)))
        count = positions.size
        above = np.arange(1, count + 1) / count - positions
        below = positions - np.arange(0, count) / count

        return float(min(max(np.max(above), np.max(below), 0.0), 1.0))

    grid = np.linspace(1.0, 10.0, fraglaw.defaults.SUP_GRID_POINTS)
    histogram = first_digit_histogram(values, weights, grid.tolist())

    return _grid_distance(histogram.pn_values())

def chi_square_benford(histogram: DigitHistogram,
                       n_pieces: Optional[float] = None,
                       log_n_pieces: Optional[float] = None) -> GofReport:
    """
    Computes the chi-square statistic sum_i (X_i N - Y_i N)^2 / (N Y_i) with X_i the frequency of the digit i,
    Y_i = log10(1 + 1/i) and N the number of pieces.

    Args:
        histogram: The first-digit histogram.
        n_pieces: The number N of pieces; defaults to the total weight of the histogram. Weighted spectra whose
            weights are probabilities pass the number of pieces they stand for.
        log_n_pieces: The natural logarithm of N, for piece counts beyond the float range. Excludes `n_pieces`.

    Returns:
        The goodness-of-fit report.

    Raises:
        InvalidArgumentError: If the histogram has zero total weight or both piece counts are given.
    """

    if not histogram.total > 0:
        raise InvalidArgumentError("Cannot compute a chi-square value for a histogram with zero total weight.")

    if n_pieces is not None and log_n_pieces is not None:
        raise InvalidArgumentError("Give the number of pieces either directly or as a logarithm, not both.")

    frequencies = histogram.proportions()
    expected = benford_digit_probabilities()
    per_piece = float(np.sum((frequencies - expected) ** 2 / expected))

    if log_n_pieces is None:
        log_n_pieces = math.log(histogram.total if n_pieces is None else float(n_pieces))

    log_chi_square = log_n_pieces + math.log(per_piece) if per_piece > 0.0 else -math.inf

    return GofReport(_exp_or_inf(log_chi_square),
                     fraglaw.defaults.CHI_SQUARE_DOF,
                     float(np.max(np.abs(frequencies - expected))),
                     ks_distance_benford(histogram),
                     _exp_or_inf(log_n_pieces),
                     log_chi_square)

def discrepancy_mod1(values: ArrayLike, weights: Optional[ArrayLike] = None) -> float:
    """
    Approximates the star discrepancy of the fractional parts of `values`: the sup over t in {0, 0.01, ..., 1} of
    |F(t) - t|, where F is the weighted empirical distribution function of the fractional parts.

    Raises:
        InvalidArgumentError: If there are no values or the weights are invalid.
    """

    value_array = np.asarray(values, dtype=np.float64)
    weight_array = piece_weights(value_array, weights)

    fractional_parts = value_array - np.floor(value_array)
    order = np.argsort(fractional_parts, kind="stable")
    sorted_parts = fractional_parts[order]
    cumulative = np.concatenate(([0.0], np.cumsum(weight_array[order]))) / np.sum(weight_array)

    grid = np.linspace(0.0, 1.0, fraglaw.defaults.SUP_GRID_POINTS)
    empirical = cumulative[np.searchsorted(sorted_parts, grid, side="right")]

    return float(np.max(np.abs(empirical - grid)))

class TrialSeries:
    """
    The values of P_N(s) at a fixed threshold s observed in independent trials at a fixed number of levels N.
    """

    def __init__(self, s: float, levels: int, values: Sequence[float]) -> None:
        """
        Creates a new `TrialSeries` object.

        Raises:
            InvalidArgumentError: If a value lies outside of [0, 1].
        """

        value_array = np.asarray(values, dtype=np.float64)
        if np.any(value_array < 0.0) or np.any(value_array > 1.0):
            raise InvalidArgumentError("P_N(s) values must lie in [0, 1].")

        self._s = float(s)
        self._levels = levels
        self._values = value_array

    @property
    def s(self) -> float:
        """
        The significand threshold.
        """

        return self._s

    @property
    def levels(self) -> int:
        """
        The number of levels N of the trials.
        """

        return self._levels

    @property
    def values(self) -> np.ndarray:
        """
        The observed values, in trial order.
        """

        return self._values.copy()

def mean_variance_series(series: TrialSeries) -> Tuple[float, float]:
    """
    Returns the sample mean and the unbiased sample variance of the series.

    Raises:
        InvalidArgumentError: If the series has fewer than 2 trials.
    """

    values = series.values
    if values.size < 2:
        raise InvalidArgumentError("At least 2 trials are needed for a variance, got {}.".format(values.size))

    if np.all(values == values[0]):
        return (float(values[0]), 0.0)

    return (float(np.mean(values)), float(np.var(values, ddof=1)))

def series_to_csv(series: Sequence[TrialSeries], manifest_hash: Optional[str] = None) -> str:
    """
    Returns the CSV table `levels,s,mean,variance` of the given series.
    """

    text = io.StringIO()
    if manifest_hash is not None:
        text.write("# manifest: {}\n".format(manifest_hash))

    text.write("levels,s,mean,variance\n")
    for entry in series:
        (mean, variance) = mean_variance_series(entry)
        text.write("{},{!r},{!r},{!r}\n".format(entry.levels, entry.s, mean, variance))

    return text.getvalue()
