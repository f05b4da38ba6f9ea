#!/usr/bin/env python3

"""
This module contains the terms of the determinant expansion of a matrix with random positive entries and the
fixed-point statistics of random permutations that govern the dependence between two such terms.

The term of a permutation sigma is a_{1,sigma(1)} ... a_{n,sigma(n)}; only its length matters here, so signs are
ignored. Two terms share exactly as many factors as their permutations have agreeing positions.
"""

import itertools
import logging
import math
from typing import Iterator, List, Optional

import numpy as np

import fraglaw.defaults
from fraglaw.densities import CutDensity, UniformDensity
from fraglaw.errors import InvalidArgumentError
from fraglaw.histogram import DigitHistogram, first_digit_histogram, sum_histograms
from fraglaw.trials import run_trials, trial_generator

MODES = ("exhaustive", "sampled")

class MatrixSample:
    """
    An n x n matrix with strictly positive entries, stored through the base-10 logarithms of its entries.
    """

    def __init__(self, entries: np.ndarray) -> None:
        """
        Creates a new `MatrixSample` object.

        Raises:
            InvalidArgumentError: If the matrix is not square of size at least 2 or has an entry that is not
                strictly positive.
        """

        matrix = np.asarray(entries, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 2:
            raise InvalidArgumentError("Expected a square matrix of size at least 2, got shape {}."
                                       .format(matrix.shape))

        if not np.all(matrix > 0.0) or not np.all(np.isfinite(matrix)):
            raise InvalidArgumentError("All matrix entries must be finite and strictly positive.")

        self._log10_entries = np.log10(matrix)

    @staticmethod
    def draw(n: int, rng: np.random.Generator, density: Optional[CutDensity] = None) -> "MatrixSample":
        """
        Draws an n x n matrix with independent entries from `density` (uniform on (0, 1) by default).
        """

        if n < 2:
            raise InvalidArgumentError("The matrix size must be at least 2, got {}.".format(n))

        entry_density = density if density is not None else UniformDensity()
        return MatrixSample(entry_density.sample(rng, n * n).reshape(n, n))

    @property
    def n(self) -> int:
        """
        The size of the matrix.
        """

        return self._log10_entries.shape[0]

    @property
    def log10_entries(self) -> np.ndarray:
        """
        The base-10 logarithms of the entries.
        """

        return self._log10_entries.copy()

    def term_log10(self, permutations: np.ndarray) -> np.ndarray:
        """
        Returns the base-10 log-lengths of the terms of the permutations given as the rows of an integer array.
        """

        rows = np.arange(self.n)[np.newaxis, :]
        return self._log10_entries[rows, permutations].sum(axis=1)

class PermTermSet:
    """
    The permutations whose terms are collected: all n! of them in lexicographic order, or `samples` independent
    uniformly random ones.
    """

    def __init__(self,
                 n: int,
                 mode: str = "exhaustive",
                 samples: Optional[int] = None,
                 block: int = fraglaw.defaults.PERMUTATION_BLOCK) -> None:
        """
        Creates a new `PermTermSet` object.

        Raises:
            InvalidArgumentError: If `mode` is unknown, if n > 10 in exhaustive mode or if the sampled mode is not
                given a number of samples in [1, 10^8].
        """

        if mode not in MODES:
            raise InvalidArgumentError("Unknown permutation mode {!r}; expected one of {}.".format(mode, MODES))

        if mode == "exhaustive" and n > fraglaw.defaults.MAX_EXHAUSTIVE_MATRIX_SIZE:
            raise InvalidArgumentError("Exhaustive enumeration is limited to n <= {}, got n = {}."
                                       .format(fraglaw.defaults.MAX_EXHAUSTIVE_MATRIX_SIZE, n))

        if mode == "sampled" and (samples is None or not 1 <= samples <= fraglaw.defaults.MAX_SAMPLED_PERMUTATIONS):
            raise InvalidArgumentError("The sampled mode needs between 1 and {} permutations, got {}."
                                       .format(fraglaw.defaults.MAX_SAMPLED_PERMUTATIONS, samples))

        self._n = n
        self._mode = mode
        self._samples = samples
        self._block = block

    @property
    def mode(self) -> str:
        """
        Either "exhaustive" or "sampled".
        """

        return self._mode

    @property
    def term_count(self) -> int:
        """
        The number of terms: n! or the number of samples.
        """

        if self._mode == "exhaustive":
            return math.factorial(self._n)

        return self._samples if self._samples is not None else 0

    def blocks(self, rng: Optional[np.random.Generator] = None) -> Iterator[np.ndarray]:
        """
        Generates the permutations as integer arrays of at most `block` rows.

        Args:
            rng: The generator of the sampled mode.
        """

        if self._mode == "exhaustive":
            permutations = itertools.permutations(range(self._n))
            while True:
                chunk = list(itertools.islice(permutations, self._block))
                if not chunk:
                    return

                yield np.array(chunk, dtype=np.intp)

        if rng is None:
            raise InvalidArgumentError("The sampled mode needs a random generator.")

        remaining = self.term_count
        while remaining > 0:
            size = min(self._block, remaining)
            yield rng.permuted(np.tile(np.arange(self._n, dtype=np.intp), (size, 1)), axis=1)
            remaining -= size

def term_log10_values(sample: MatrixSample,
                      terms: PermTermSet,
                      rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    Returns the base-10 log-lengths of all collected terms, in generation order.
    """

    return np.concatenate([sample.term_log10(block) for block in terms.blocks(rng)])

def determinant_terms(sample: MatrixSample,
                      mode: str = "exhaustive",
                      samples: Optional[int] = None,
                      rng: Optional[np.random.Generator] = None,
                      grid: Optional[List[float]] = None) -> DigitHistogram:
    """
    Returns the first-digit histogram of the terms of the determinant expansion of `sample`.

    Args:
        sample: The matrix.
        mode: "exhaustive" for all n! terms (n <= 10), "sampled" for `samples` uniformly random permutations.
        samples: The number of permutations of the sampled mode.
        rng: The generator of the sampled mode.
        grid: The thresholds at which P_N(s) is tabulated, or `None`.

    Raises:
        InvalidArgumentError: If the mode does not fit the matrix size.
    """

    terms = PermTermSet(sample.n, mode, samples)

    histogram = DigitHistogram.empty(grid)
    for block in terms.blocks(rng):
        histogram = histogram.merge(first_digit_histogram(sample.term_log10(block), grid=grid))

    logging.debug("Collected %s determinant terms of a %sx%s matrix.", histogram.total, sample.n, sample.n)
    return histogram

def pooled_determinant_terms(n: int,
                             matrices: int,
                             seed: int = fraglaw.defaults.SEED,
                             mode: str = "exhaustive",
                             samples: Optional[int] = None,
                             density: Optional[CutDensity] = None,
                             threads: Optional[int] = None) -> DigitHistogram:
    """
    Pools the term histograms of `matrices` independent random matrices. Matrix k draws its entries and sampled
    permutations from the stream of trial k.
    """

    if matrices < 1:
        raise InvalidArgumentError("At least one matrix is needed, got {}.".format(matrices))

    def matrix_terms(matrix_index: int) -> DigitHistogram:
        rng = trial_generator(seed, matrix_index)
        sample = MatrixSample.draw(n, rng, density)
        return determinant_terms(sample, mode, samples, rng)

    return sum_histograms(run_trials(matrix_terms, matrices, threads))

def derangement_count(m: int) -> int:
    """
    Returns D_m, the number of permutations of m elements without fixed point.
    """

    if m < 0:
        raise InvalidArgumentError("Cannot count derangements of {} elements.".format(m))

    (previous, current) = (1, 0)
    if m == 0:
        return previous

    for size in range(2, m + 1):
        (previous, current) = (current, (size - 1) * (current + previous))

    return current

def rencontres_count(n: int, k: int) -> int:
    """
    Returns the number of permutations of n elements with exactly k fixed points, C(n, k) D_{n-k}.

    Raises:
        InvalidArgumentError: Unless 0 <= k <= n <= 20.
    """

    if not 0 <= n <= fraglaw.defaults.MAX_RENCONTRES_SIZE:
        raise InvalidArgumentError("n must lie in [0, {}], got {}.".format(fraglaw.defaults.MAX_RENCONTRES_SIZE, n))

    if not 0 <= k <= n:
        raise InvalidArgumentError("k must lie in [0, n] = [0, {}], got {}.".format(n, k))

    return math.comb(n, k) * derangement_count(n - k)

class SharedFactorDistribution:
    """
    The empirical distribution of K, the number of positions at which two independent uniformly random
    permutations of n elements agree.
    """

    def __init__(self, n: int, counts: np.ndarray) -> None:
        self._n = n
        self._counts = counts

    @property
    def n(self) -> int:
        """
        The permutation size.
        """

        return self._n

    @property
    def counts(self) -> np.ndarray:
        """
        `counts[k]` is the number of pairs with K = k, for k = 0, ..., n.
        """

        return self._counts.copy()

    @property
    def trials(self) -> int:
        """
        The number of sampled pairs.
        """

        return int(self._counts.sum())

    def probabilities(self) -> np.ndarray:
        """
        Returns the empirical probabilities of K = 0, ..., n.
        """

        return self._counts / self._counts.sum()

    def mean(self) -> float:
        """
        Returns the sample mean of K.
        """

        return float(np.dot(np.arange(self._n + 1), self.probabilities()))

    def variance(self) -> float:
        """
        Returns the unbiased sample variance of K.
        """

        trials = self.trials
        if trials < 2:
            raise InvalidArgumentError("At least 2 trials are needed for a variance.")

        deviations = (np.arange(self._n + 1) - self.mean()) ** 2
        return float(np.dot(deviations, self._counts) / (trials - 1))

def shared_factor_distribution(n: int,
                               trials: int,
                               seed: int = fraglaw.defaults.SEED,
                               block: int = fraglaw.defaults.PERMUTATION_BLOCK) -> SharedFactorDistribution:
    """
    Samples `trials` pairs of independent uniformly random permutations and counts their agreeing positions.

    Raises:
        InvalidArgumentError: If n < 2 or trials < 1.
    """

    if n < 2:
        raise InvalidArgumentError("The permutation size must be at least 2, got {}.".format(n))

    if trials < 1:
        raise InvalidArgumentError("At least one trial is needed, got {}.".format(trials))

    rng = trial_generator(seed, 0)
    identity = np.arange(n, dtype=np.intp)
    counts = np.zeros(n + 1, dtype=np.int64)

    remaining = trials
    while remaining > 0:
        size = min(block, remaining)
        sigma = rng.permuted(np.tile(identity, (size, 1)), axis=1)
        tau = rng.permuted(np.tile(identity, (size, 1)), axis=1)

        counts += np.bincount((sigma == tau).sum(axis=1), minlength=n + 1)
        remaining -= size

    return SharedFactorDistribution(n, counts)
