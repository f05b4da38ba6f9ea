#!/usr/bin/env python3

"""
This module contains the unrestricted process with a fixed cut proportion p, whose 2^N leaves take only the N + 1
lengths x_n = p^(N-n) (1-p)^n, the length x_n being carried by C(N, n) leaves.

Whether the leaves become Benford depends on y = log10((1-p)/p): a rational y = r/q makes the significands of the
spectrum periodic in n with period q, so the leaves stay on at most q significand classes, while an irrational y
spreads them out. Since rationality cannot be decided from a float, `detect_rational_y` only searches for small
denominators within a tolerance.
"""

from fractions import Fraction
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import special

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError
from fraglaw.histogram import DigitHistogram, first_digit_histogram
from fraglaw.significand import LogLength, significands
from fraglaw.stats import chi_square_benford, discrepancy_mod1, GofReport

LN2: float = math.log(2.0)
LN10: float = math.log(10.0)

def _check_proportion(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError("The fixed proportion p must lie in (0, 1), got {}.".format(p))

class FixedProportionSpectrum:
    """
    The distinct leaf lengths of an N-level tree cut at the fixed proportion p, with the fraction of the 2^N leaves
    that carry each of them.
    """

    def __init__(self, levels: int, p: float, log10_lengths: np.ndarray, log_weights: np.ndarray) -> None:
        """
        Creates a new `FixedProportionSpectrum` object.

        Args:
            levels: The number of levels N.
            p: The cut proportion.
            log10_lengths: The base-10 logarithms of the distinct lengths.
            log_weights: The natural logarithms of the fractions of leaves carrying each length.

        Raises:
            InvalidArgumentError: If the weights do not sum to 1 or the 2^N leaves do not add up to the unit stick
                within 1e-9.
        """

        if log10_lengths.shape != log_weights.shape:
            raise InvalidArgumentError("Got {} lengths and {} weights.".format(log10_lengths.size, log_weights.size))

        # log-gamma values of order N log N lose absolute precision as N grows.
        tolerance = 1e-9 + 1e-14 * levels

        total_weight = float(np.exp(special.logsumexp(log_weights)))
        if abs(total_weight - 1.0) > tolerance:
            raise InvalidArgumentError("The spectrum weights sum to {} instead of 1.".format(total_weight))

        total_length = float(np.exp(special.logsumexp(log_weights + levels * LN2 + log10_lengths * LN10)))
        if abs(total_length - 1.0) > tolerance:
            raise InvalidArgumentError("The spectrum does not conserve the unit stick: {}.".format(total_length))

        self._levels = levels
        self._p = p
        self._log10_lengths = log10_lengths
        self._log_weights = log_weights

    @property
    def levels(self) -> int:
        """
        The number of levels N.
        """

        return self._levels

    @property
    def p(self) -> float:
        """
        The cut proportion.
        """

        return self._p

    @property
    def log10_lengths(self) -> np.ndarray:
        """
        The base-10 logarithms of the distinct lengths x_0, ..., x_N.
        """

        return self._log10_lengths

    @property
    def log_weights(self) -> np.ndarray:
        """
        The natural logarithms of the weights C(N, n) / 2^N.
        """

        return self._log_weights

    @property
    def weights(self) -> np.ndarray:
        """
        The weights C(N, n) / 2^N; far tails underflow to 0.
        """

        return np.exp(self._log_weights)

    @property
    def entries(self) -> List[Tuple[LogLength, float]]:
        """
        The pairs (length, natural log of the weight).
        """

        return [(LogLength(length), float(weight)) for (length, weight) in zip(self._log10_lengths, self._log_weights)]

    def __len__(self) -> int:
        return self._log10_lengths.size

def fixed_proportion_spectrum(levels: int, p: float) -> FixedProportionSpectrum:
    """
    Computes the spectrum x_n = p^(N-n) (1-p)^n with weights C(N, n) / 2^N for n = 0, ..., N.

    The weights are evaluated through the log-gamma function, so N may reach 10^6. For p = 1/2 all lengths coincide
    and the spectrum collapses to the single length 2^-N of weight 1.

    Raises:
        InvalidArgumentError: If p is outside of (0, 1) or N is outside of [1, 10^6].
    """

    _check_proportion(p)
    if not 1 <= levels <= fraglaw.defaults.MAX_FIXED_LEVELS:
        raise InvalidArgumentError("The fixed-proportion model needs 1 <= N <= {}, got N = {}."
                                   .format(fraglaw.defaults.MAX_FIXED_LEVELS, levels))

    if p == 0.5:
        return FixedProportionSpectrum(levels, p, np.array([-levels * math.log10(2.0)]), np.array([0.0]))

    n = np.arange(levels + 1, dtype=np.float64)
    log_weights = (special.gammaln(levels + 1.0) - special.gammaln(n + 1.0) - special.gammaln(levels - n + 1.0)
                   - levels * LN2)
    log10_lengths = (levels - n) * (math.log(p) / LN10) + n * (math.log1p(-p) / LN10)

    return FixedProportionSpectrum(levels, p, log10_lengths, log_weights)

def spectrum_digit_distribution(spectrum: FixedProportionSpectrum,
                                grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> DigitHistogram:
    """
    Returns the weighted first-digit histogram of the spectrum; its total weight is 1.
    """

    return first_digit_histogram(spectrum.log10_lengths, spectrum.weights, grid)

def spectrum_gof(spectrum: FixedProportionSpectrum) -> GofReport:
    """
    Compares the spectrum with Benford's law as a collection of 2^N pieces. The statistic is scaled in the log domain
    and its verdict holds at every N, also where the statistic itself overflows a float.
    """

    histogram = spectrum_digit_distribution(spectrum)

    return chi_square_benford(histogram, log_n_pieces=spectrum.levels * LN2)

class MultisectionResult(NamedTuple):
    """
    The probability that a binomially weighted index is congruent to j modulo q, with the size of the terms that
    separate it from 1/q.
    """

    probability: float
    error_bound: float

def multisection_error_bound(levels: int, q: int) -> float:
    """
    Returns (q - 1) |cos(pi/q)|^N, the bound on |Prob(n = j mod q) - 1/q|.
    """

    if q < 1:
        raise InvalidArgumentError("The modulus q must be positive, got {}.".format(q))

    return (q - 1) * abs(math.cos(math.pi / q)) ** levels

def multisection_probability(levels: int, q: int, j: int) -> MultisectionResult:
    """
    Returns sum over n = j mod q of C(N, n) / 2^N, evaluated by the roots-of-unity filter
    (1/q) sum_{s=0}^{q-1} cos(pi s/q)^N cos(pi (N - 2j) s/q).

    Raises:
        InvalidArgumentError: If N < 1, q < 1 or j is not in [0, q).
    """

    if levels < 1:
        raise InvalidArgumentError("The number of levels must be at least 1, got {}.".format(levels))

    if q < 1:
        raise InvalidArgumentError("The modulus q must be positive, got {}.".format(q))

    if not 0 <= j < q:
        raise InvalidArgumentError("The residue j must lie in [0, {}), got {}.".format(q, j))

    terms = [math.cos(math.pi * s / q) ** levels * math.cos(math.pi * (levels - 2 * j) * s / q) for s in range(q)]

    return MultisectionResult(math.fsum(terms) / q, multisection_error_bound(levels, q))

class RationalY:
    """
    A rational approximation y = r/q in lowest terms of y = log10((1-p)/p).
    """

    def __init__(self, r: int, q: int) -> None:
        if q < 1:
            raise InvalidArgumentError("The denominator must be positive, got {}.".format(q))

        if math.gcd(r, q) != 1:
            raise InvalidArgumentError("{}/{} is not in lowest terms.".format(r, q))

        self._r = r
        self._q = q

    @property
    def r(self) -> int:
        """
        The numerator.
        """

        return self._r

    @property
    def q(self) -> int:
        """
        The denominator, which is the period of the significands of the spectrum.
        """

        return self._q

    @property
    def y(self) -> float:
        """
        The value r/q.
        """

        return self._r / self._q

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalY):
            return NotImplemented

        return (self._r, self._q) == (other._r, other._q)

    def __hash__(self) -> int:
        return hash((self._r, self._q))

    def __repr__(self) -> str:
        return "RationalY({}, {})".format(self._r, self._q)

def log_ratio_exponent(p: float) -> float:
    """
    Returns y = log10((1-p)/p).
    """

    _check_proportion(p)
    return (math.log1p(-p) - math.log(p)) / LN10

def _is_periodic(p: float, q: int) -> bool:
    spectrum_levels = 2 * q + 1
    n = np.arange(spectrum_levels + 1, dtype=np.float64)
    logs = (spectrum_levels - n) * (math.log(p) / LN10) + n * (math.log1p(-p) / LN10)

    shift = logs[q:] - logs[:-q]
    distance = np.abs(shift - np.round(shift))

    return bool(np.all(distance < 1e-9 * max(1.0, float(np.max(np.abs(logs))))))

def detect_rational_y(p: float,
                      q_max: int = fraglaw.defaults.RATIONAL_Q_MAX,
                      tol: float = fraglaw.defaults.RATIONAL_TOLERANCE) -> Optional[RationalY]:
    """
    Searches for the smallest denominator q <= q_max such that y = log10((1-p)/p) lies within `tol` of some r/q.

    This is a numerical heuristic: a float cannot tell a rational y from an irrational one that is very close to a
    fraction. A candidate is only accepted if the significands of the spectrum repeat with period q.

    Args:
        p: The cut proportion.
        q_max: The largest denominator tried.
        tol: The tolerance on |y - r/q|.

    Returns:
        The approximation, or `None` if there is none up to `q_max`.
    """

    if q_max < 1:
        raise InvalidArgumentError("q_max must be at least 1, got {}.".format(q_max))

    y = log_ratio_exponent(p)

    for q in range(1, q_max + 1):
        r = round(y * q)
        if abs(y - r / q) >= tol:
            continue

        fraction = Fraction(r, q)
        if not _is_periodic(p, fraction.denominator):
            logging.warning("y = %s is within %s of %s but the spectrum significands are not periodic.",
                            y, tol, fraction)
            continue

        return RationalY(fraction.numerator, fraction.denominator)

    logging.debug("y = %s has no rational approximation with q <= %s within %s.", y, q_max, tol)
    return None

def convergents(y: float, depth: int = fraglaw.defaults.MAX_CONVERGENT_DEPTH) -> List[Tuple[int, int]]:
    """
    Returns the continued-fraction convergents r/q of y, at most `depth` of them.

    The expansion is carried out exactly on the binary value of `y`, so it terminates once that value is reached.
    Every convergent satisfies |y - r/q| < 1/q^2.

    Raises:
        InvalidArgumentError: If `depth` is not in [1, 50].
    """

    if not 1 <= depth <= fraglaw.defaults.MAX_CONVERGENT_DEPTH:
        raise InvalidArgumentError("The convergent depth must lie in [1, {}], got {}."
                                   .format(fraglaw.defaults.MAX_CONVERGENT_DEPTH, depth))

    remainder = Fraction(y)
    (r_previous, r_current) = (1, math.floor(remainder))
    (q_previous, q_current) = (0, 1)
    result = [(r_current, q_current)]
    remainder -= math.floor(remainder)

    while remainder != 0 and len(result) < depth:
        remainder = 1 / remainder
        term = math.floor(remainder)
        remainder -= term

        (r_previous, r_current) = (r_current, term * r_current + r_previous)
        (q_previous, q_current) = (q_current, term * q_current + q_previous)
        result.append((r_current, q_current))

    return result

class ConvergencePoint(NamedTuple):
    """
    How close the spectrum at N levels is to Benford.
    """

    levels: int
    max_digit_deviation: float
    discrepancy: float

def spectrum_convergence(p: float, levels: Sequence[int]) -> List[ConvergencePoint]:
    """
    Measures the largest digit deviation from Benford and the discrepancy of the log-lengths modulo 1 of the
    spectra at the given numbers of levels.
    """

    result: List[ConvergencePoint] = []
    for level_count in levels:
        spectrum = fixed_proportion_spectrum(level_count, p)
        histogram = spectrum_digit_distribution(spectrum, grid=None)
        discrepancy = discrepancy_mod1(spectrum.log10_lengths, spectrum.weights)

        result.append(ConvergencePoint(level_count, histogram.max_deviation(), discrepancy))

    return result

def spectrum_significand_classes(spectrum: FixedProportionSpectrum, tolerance: float = 1e-9) -> int:
    """
    Returns the number of distinct significands among the lengths of nonnegligible weight.
    """

    values = np.sort(significands(spectrum.log10_lengths[spectrum.weights > 1e-300]))
    if values.size == 0:
        return 0

    return 1 + int(np.count_nonzero(np.diff(values) > tolerance * 10.0))
