#!/usr/bin/env python3

"""
This module contains the `DigitHistogram` class, the weighted first-digit counts that every simulation produces, and
the function that builds it from a collection of pieces.
"""

import io
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError
from fraglaw.significand import ArrayLike, benford_digit_probabilities, significands, piece_weights

CdfGrid = List[Tuple[float, float]]

class DigitHistogram:
    """
    Weighted counts of the first digits 1..9, their total weight and an optional tabulation of the cumulative weight
    of the pieces whose significand is at most s, for s on a grid in [1, 10].

    Histograms over the same grid merge associatively and commutatively, so partial histograms of parallel trials
    combine to the same result in any grouping.
    """

    def __init__(self,
                 counts: Sequence[float],
                 total: Optional[float] = None,
                 cdf_grid: Optional[Sequence[Tuple[float, float]]] = None) -> None:
        """
        Creates a new `DigitHistogram` object.

        Args:
            counts: The weights of the first digits 1, ..., 9.
            total: The total weight; defaults to the sum of `counts`.
            cdf_grid: Pairs (s, cumulative weight of the pieces with significand at most s).

        Raises:
            InvalidArgumentError: If the counts are not 9 nonnegative numbers, if they do not sum to `total` or if
                the cumulative grid is not nondecreasing.
        """

        count_array = np.asarray(counts, dtype=np.float64)
        if count_array.shape != (9,):
            raise InvalidArgumentError("A digit histogram needs exactly 9 counts, got {}.".format(count_array.size))

        if np.any(count_array < 0) or not np.all(np.isfinite(count_array)):
            raise InvalidArgumentError("Digit counts must be finite and nonnegative.")

        counted = float(count_array.sum())
        total_weight = counted if total is None else float(total)

        if abs(counted - total_weight) > 1e-9 * max(abs(total_weight), 1.0):
            raise InvalidArgumentError("The digit counts sum to {} but the total is {}.".format(counted, total_weight))

        self._counts = count_array
        self._total = total_weight
        self._cdf_grid: Optional[CdfGrid] = None

        if cdf_grid is not None:
            self._cdf_grid = [(float(s), float(weight)) for (s, weight) in cdf_grid]
            DigitHistogram._check_cdf_grid(self._cdf_grid, total_weight)

    @staticmethod
    def _check_cdf_grid(grid: CdfGrid, total: float) -> None:
        tolerance = 1e-9 * max(abs(total), 1.0)

        for (previous, current) in zip(grid, grid[1:]):
            if current[0] <= previous[0]:
                raise InvalidArgumentError("The cdf grid points must be increasing.")

            if current[1] < previous[1] - tolerance:
                raise InvalidArgumentError("The cdf grid must be nondecreasing in s.")

        for (s, weight) in grid:
            if s >= 10.0 and abs(weight - total) > tolerance:
                raise InvalidArgumentError("The cdf grid must reach the total weight at s = 10.")

    @staticmethod
    def empty(grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> "DigitHistogram":
        """
        Returns a histogram with zero weight, the neutral element of `merge`.
        """

        cdf_grid = None if grid is None else [(s, 0.0) for s in grid]
        return DigitHistogram(np.zeros(9), 0.0, cdf_grid)

    @property
    def counts(self) -> np.ndarray:
        """
        The weights of the first digits 1, ..., 9 (a copy).
        """

        return self._counts.copy()

    @property
    def total(self) -> float:
        """
        The total weight.
        """

        return self._total

    @property
    def cdf_grid(self) -> Optional[CdfGrid]:
        """
        The tabulated cumulative weights, if present.
        """

        return None if self._cdf_grid is None else list(self._cdf_grid)

    def proportions(self) -> np.ndarray:
        """
        Returns the digit frequencies counts / total.

        Raises:
            InvalidArgumentError: If the histogram is empty.
        """

        if not self._total > 0:
            raise InvalidArgumentError("The histogram has zero total weight.")

        return self._counts / self._total

    def pn_values(self) -> List[Tuple[float, float]]:
        """
        Returns the pairs (s, P_N(s)) of the tabulated grid.
        """

        if self._cdf_grid is None:
            raise InvalidArgumentError("The histogram has no cdf grid.")

        if not self._total > 0:
            raise InvalidArgumentError("The histogram has zero total weight.")

        return [(s, weight / self._total) for (s, weight) in self._cdf_grid]

    def pn(self, s: float) -> float:
        """
        Returns P_N(s) for a threshold `s` of the tabulated grid.

        Raises:
            InvalidArgumentError: If `s` is not a point of the grid.
        """

        for (point, value) in self.pn_values():
            if abs(point - s) <= 1e-12:
                return value

        raise InvalidArgumentError("The threshold {} is not on the tabulated grid.".format(s))

    def populated_digits(self) -> List[int]:
        """
        Returns the digits that carry positive weight.
        """

        return [digit + 1 for digit in range(9) if self._counts[digit] > 0]

    def max_deviation(self) -> float:
        """
        Returns the largest absolute difference between a digit frequency and its Benford probability.
        """

        return float(np.max(np.abs(self.proportions() - benford_digit_probabilities())))

    def merge(self, other: "DigitHistogram") -> "DigitHistogram":
        """
        Returns the histogram of the union of the two piece collections.

        Raises:
            InvalidArgumentError: If both histograms carry cdf grids tabulated at different points.
        """

        merged_grid: Optional[CdfGrid] = None
        if self._cdf_grid is not None and other._cdf_grid is not None:
            if [s for (s, _) in self._cdf_grid] != [s for (s, _) in other._cdf_grid]:
                raise InvalidArgumentError("Cannot merge histograms tabulated on different grids.")

            merged_grid = [(s, mine + theirs) for ((s, mine), (_, theirs)) in zip(self._cdf_grid, other._cdf_grid)]

        return DigitHistogram(self._counts + other._counts, self._total + other._total, merged_grid)

    def __add__(self, other: "DigitHistogram") -> "DigitHistogram":
        return self.merge(other)

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the JSON representation {"total": ..., "digits": [...], "cdf_grid": [[s, w], ...]}.
        """

        result: Dict[str, Any] = {"total": self._total, "digits": [float(count) for count in self._counts]}
        if self._cdf_grid is not None:
            result["cdf_grid"] = [[s, weight] for (s, weight) in self._cdf_grid]

        return result

    @staticmethod
    def from_dict(dictionary: Dict[str, Any]) -> "DigitHistogram":
        """
        Creates a `DigitHistogram` from its JSON representation.

        Raises:
            TypeError: If a key holds a value of the wrong type.
        """

        digits = dictionary.get("digits")
        if not isinstance(digits, list):
            raise TypeError("The 'digits' key must be associated with a list of 9 numbers.")

        total = dictionary.get("total")
        if total is not None and not isinstance(total, (int, float)):
            raise TypeError("The 'total' key must be associated with a number.")

        grid = dictionary.get("cdf_grid")
        cdf_grid = None if grid is None else [(float(s), float(weight)) for (s, weight) in grid]

        return DigitHistogram(digits, total, cdf_grid)

    def to_csv(self, manifest_hash: Optional[str] = None) -> str:
        """
        Returns the CSV export with rows `digit,weight,benford_expected`.

        Args:
            manifest_hash: If given, a leading comment line records the hash of the run manifest.
        """

        expected = benford_digit_probabilities() * self._total

        text = io.StringIO()
        if manifest_hash is not None:
            text.write("# manifest: {}\n".format(manifest_hash))

        text.write("digit,weight,benford_expected\n")
        for digit in range(9):
            text.write("{},{!r},{!r}\n".format(digit + 1, float(self._counts[digit]), float(expected[digit])))

        return text.getvalue()

    def __repr__(self) -> str:
        return "DigitHistogram(total={!r}, digits={})".format(self._total, self._counts.tolist())

def first_digit_histogram(log10_values: ArrayLike,
                          weights: Optional[ArrayLike] = None,
                          grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> DigitHistogram:
    """
    Aggregates a weighted collection of pieces into a `DigitHistogram`.

    Args:
        log10_values: The base-10 logarithms of the piece lengths.
        weights: The piece weights; all pieces weigh 1 if omitted.
        grid: The significand thresholds at which P_N(s) is tabulated, or `None` for no tabulation.

    Returns:
        The histogram whose count for digit d is the weight of the pieces with significand in [d, d + 1).

    Raises:
        InvalidArgumentError: If the collection is empty or has zero total weight.
    """

    values = np.asarray(log10_values, dtype=np.float64)
    weight_array = piece_weights(values, weights)

    piece_significands = significands(values)
    digits = np.clip(np.floor(piece_significands).astype(np.int64), 1, 9)

    counts = np.bincount(digits - 1, weights=weight_array, minlength=9)
    total = float(counts.sum())

    cdf_grid: Optional[CdfGrid] = None
    if grid is not None:
        order = np.argsort(piece_significands, kind="stable")
        sorted_significands = piece_significands[order]
        cumulative = np.cumsum(weight_array[order])

        cdf_grid = []
        for s in grid:
            if s >= 10.0:
                cdf_grid.append((float(s), total))
                continue

            index = int(np.searchsorted(sorted_significands, s, side="right"))
            cdf_grid.append((float(s), float(cumulative[index - 1]) if index > 0 else 0.0))

    return DigitHistogram(counts, total, cdf_grid)

def histogram_from_digits(digits: ArrayLike) -> DigitHistogram:
    """
    Builds an unweighted histogram from an array of leading digits 1..9.
    """

    digit_array = np.asarray(digits, dtype=np.int64)
    if digit_array.size and (digit_array.min() < 1 or digit_array.max() > 9):
        raise InvalidArgumentError("Leading digits must lie in 1..9.")

    counts = np.bincount(digit_array - 1, minlength=9).astype(np.float64)
    return DigitHistogram(counts, float(counts.sum()))

def sum_histograms(histograms: Sequence[DigitHistogram]) -> DigitHistogram:
    """
    Merges a sequence of histograms in the given order.
    """

    if len(histograms) == 0:
        raise InvalidArgumentError("There is no histogram to merge.")

    result = histograms[0]
    for histogram in histograms[1:]:
        result = result.merge(histogram)

    return result

