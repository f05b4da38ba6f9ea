#!/usr/bin/env python3

"""
This module contains the decomposition of a stick of integer length with a stopping sequence.

A stick whose length belongs to the stopping sequence, or has length 1, stops decomposing. Any other stick of length
l is cut at an integer c drawn uniformly from [1, l - 1] into sticks of lengths c and l - c, which are then treated
the same way. Lengths may have hundreds of digits: sticks at or above `MATERIALIZATION_THRESHOLD` are Python integers
on an explicit work stack, smaller ones are processed in batches of int64 arrays.
"""

from functools import lru_cache
import io
import logging
import math
from typing import Any, Dict, List, Optional

import mpmath
import numpy as np
import sympy

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError, NumericFailure
from fraglaw.histogram import DigitHistogram
from fraglaw.stats import chi_square_benford, chi_square_critical_value, GofReport
from fraglaw.trials import run_trials, trial_generator

# Largest length that fits in a double without rounding.
FLOAT_EXACT_LIMIT: int = 2 ** 53

SIEVE_LIMIT: int = 2 ** 24

# Batches of small sticks are flushed before their total could overflow int64.
BATCH_TOTAL_LIMIT: int = 2 ** 62

POWERS_OF_TEN = np.array([10 ** exponent for exponent in range(19)], dtype=np.int64)

class BigLength:
    """
    A stick length: an arbitrary-precision integer at least 1.
    """

    def __init__(self, value: int) -> None:
        """
        Creates a new `BigLength` object.

        Raises:
            InvalidArgumentError: If `value` is not an integer at least 1.
        """

        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidArgumentError("A length must be an integer, got {!r}.".format(value))

        if value < 1:
            raise InvalidArgumentError("A length must be at least 1, got {}.".format(value))

        self._value = value

    @staticmethod
    def parse(text: str) -> "BigLength":
        """
        Parses a length written as an integer ("1000001"), a power ("10^500", "2**64") or in scientific notation
        with an integral value ("1e6").

        Raises:
            InvalidArgumentError: If the text is not such a number.
        """

        stripped = text.strip().replace("**", "^")
        try:
            if "^" in stripped:
                (base, exponent) = stripped.split("^")
                return BigLength(int(base) ** int(exponent))

            if "e" in stripped.lower():
                (mantissa, exponent) = stripped.lower().split("e")
                if "." in mantissa:
                    (whole, fraction) = mantissa.split(".")
                    digits = int(whole + fraction)
                    shift = int(exponent) - len(fraction)
                else:
                    (digits, shift) = (int(mantissa), int(exponent))

                if shift < 0:
                    raise InvalidArgumentError("{} is not an integer.".format(text))

                return BigLength(digits * 10 ** shift)

            return BigLength(int(stripped))
        except ValueError:
            raise InvalidArgumentError("Cannot parse the length {!r}.".format(text))

    @property
    def value(self) -> int:
        """
        The length.
        """

        return self._value

    def __int__(self) -> int:
        return self._value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BigLength):
            return NotImplemented

        return self._value == other._value

    def __hash__(self) -> int:
        return hash(self._value)

    def __repr__(self) -> str:
        return "BigLength({})".format(self._value)

def first_digit_big(length: int) -> int:
    """
    Returns the leading decimal digit of a positive integer of any size, exactly.

    Raises:
        InvalidArgumentError: If `length` is smaller than 1.
    """

    if length < 1:
        raise InvalidArgumentError("A length must be at least 1, got {}.".format(length))

    exponent = int((length.bit_length() - 1) * math.log10(2.0))
    power = 10 ** exponent

    while power * 10 <= length:
        power *= 10

    while power > length:
        power //= 10

    return length // power

def first_digits_int64(lengths: np.ndarray) -> np.ndarray:
    """
    Returns the leading decimal digits of an array of positive int64 lengths, exactly.
    """

    exponents = np.floor(np.log10(lengths.astype(np.float64))).astype(np.int64)
    exponents = np.clip(exponents, 0, 18)

    exponents -= (POWERS_OF_TEN[exponents] > lengths).astype(np.int64)
    upper = np.minimum(exponents + 1, 18)
    exponents += ((exponents < 18) & (POWERS_OF_TEN[upper] <= lengths)).astype(np.int64)

    return lengths // POWERS_OF_TEN[exponents]

def _is_square(value: int) -> bool:
    if value < 0:
        return False

    root = math.isqrt(value)
    return root * root == value

def _is_square_int64(values: np.ndarray) -> np.ndarray:
    roots = np.floor(np.sqrt(values.astype(np.float64))).astype(np.int64)
    result = np.zeros(values.shape, dtype=bool)
    for offset in (-1, 0, 1):
        candidate = roots + offset
        result |= (candidate >= 0) & (candidate * candidate == values)

    return result

@lru_cache(maxsize=None)
def _prime_sieve(limit: int) -> np.ndarray:
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for candidate in range(2, math.isqrt(limit - 1) + 1):
        if sieve[candidate]:
            sieve[candidate * candidate::candidate] = False

    return sieve

@lru_cache(maxsize=None)
def _fibonacci_numbers(limit: int) -> np.ndarray:
    numbers = [1, 2]
    while numbers[-1] + numbers[-2] < limit:
        numbers.append(numbers[-1] + numbers[-2])

    return np.array(numbers, dtype=np.int64)

def _n_log_n(n: int) -> int:
    if n < 2:
        return 0

    with mpmath.workdps(len(str(n)) + 30):
        return int(mpmath.floor(n * mpmath.log(n)))

def _invert_n_log_n(value: int) -> int:
    if value < FLOAT_EXACT_LIMIT:
        target = float(value)
        n = max(2.0, target / max(math.log(target), 1.0))
        for _ in range(100):
            step = (n * math.log(n) - target) / (math.log(n) + 1.0)
            n -= step
            if abs(step) < 1e-9:
                break

        return int(n)

    with mpmath.workdps(len(str(value)) + 30):
        target = mpmath.mpf(value)
        n = target / mpmath.log(target)
        for _ in range(200):
            step = (n * mpmath.log(n) - target) / (mpmath.log(n) + 1)
            n -= step
            if abs(step) < 1e-6:
                break

        return int(mpmath.floor(n))

class StoppingSequence:
    """
    A set of lengths at which sticks stop decomposing.
    """

    KINDS = ("evens", "primes", "squares", "powers_of_two", "fibonacci", "n_log_n")

    def __init__(self, kind: str) -> None:
        """
        Creates a new `StoppingSequence` object.

        Args:
            kind: One of "evens", "primes", "squares", "powers_of_two", "fibonacci" and "n_log_n"; the last is the
                sequence floor(n log n), which grows like the primes.

        Raises:
            InvalidArgumentError: If `kind` is unknown.
        """

        if kind not in StoppingSequence.KINDS:
            raise InvalidArgumentError("Unknown stopping sequence {!r}; expected one of {}."
                                       .format(kind, StoppingSequence.KINDS))

        self._kind = kind

    @property
    def kind(self) -> str:
        """
        The name of the sequence.
        """

        return self._kind

    def contains(self, length: int) -> bool:
        """
        Returns whether the positive integer `length` is a term of the sequence.

        Primality is decided by sympy's `isprime`: trial division and deterministic Miller-Rabin bases below 2^64,
        the Baillie-PSW test above.
        """

        if self._kind == "evens":
            return length % 2 == 0

        if self._kind == "primes":
            return bool(sympy.isprime(length))

        if self._kind == "squares":
            return _is_square(length)

        if self._kind == "powers_of_two":
            return length > 0 and length & (length - 1) == 0

        if self._kind == "fibonacci":
            return _is_square(5 * length * length + 4) or _is_square(5 * length * length - 4)

        estimate = _invert_n_log_n(length)
        return any(_n_log_n(n) == length for n in range(max(1, estimate - 2), estimate + 3))

    def contains_array(self, lengths: np.ndarray) -> np.ndarray:
        """
        Vectorised version of `contains` for an int64 array of lengths below 2^52.
        """

        if self._kind == "evens":
            return lengths % 2 == 0

        if self._kind == "squares":
            return _is_square_int64(lengths)

        if self._kind == "powers_of_two":
            return (lengths > 0) & ((lengths & (lengths - 1)) == 0)

        if self._kind == "fibonacci":
            return np.isin(lengths, _fibonacci_numbers(FLOAT_EXACT_LIMIT))

        if self._kind == "primes":
            small = lengths < SIEVE_LIMIT
            result = np.zeros(lengths.shape, dtype=bool)
            result[small] = _prime_sieve(SIEVE_LIMIT)[lengths[small]]
            for index in np.flatnonzero(~small):
                result[index] = sympy.isprime(int(lengths[index]))

            return result

        return self._contains_n_log_n_array(lengths)

    def _contains_n_log_n_array(self, lengths: np.ndarray) -> np.ndarray:
        targets = lengths.astype(np.float64)
        n = np.maximum(2.0, targets / np.maximum(np.log(np.maximum(targets, 2.0)), 1.0))
        for _ in range(60):
            n = n - (n * np.log(n) - targets) / (np.log(n) + 1.0)
            n = np.maximum(n, 2.0)

        result = np.zeros(lengths.shape, dtype=bool)
        undecided = np.zeros(lengths.shape, dtype=bool)
        base = np.floor(n).astype(np.int64)

        for offset in range(-2, 3):
            candidates = np.maximum(base + offset, 1).astype(np.float64)
            values = candidates * np.log(candidates)
            floors = np.floor(values)

            result |= floors == targets
            # floor(n log n) is unreliable in double precision next to an integer.
            undecided |= np.abs(values - np.round(values)) < 1e-6 * np.maximum(values, 1.0)

        for index in np.flatnonzero(undecided & ~result):
            result[index] = self.contains(int(lengths[index]))

        return result

    def __repr__(self) -> str:
        return "StoppingSequence({!r})".format(self._kind)

def stops(sequence: StoppingSequence, length: int) -> bool:
    """
    Returns whether a stick of the given length stops decomposing: sticks of length 1 always stop, longer ones stop
    exactly when their length is a term of the sequence.

    Raises:
        InvalidArgumentError: If `length` is smaller than 1.
    """

    if length < 1:
        raise InvalidArgumentError("A length must be at least 1, got {}.".format(length))

    return length == 1 or sequence.contains(length)

def uniform_big(rng: np.random.Generator, low: int, high: int) -> int:
    """
    Draws an integer uniformly from [low, high] by rejection sampling over 64-bit random limbs.
    """

    span = high - low + 1
    if span < 1:
        raise InvalidArgumentError("Empty range [{}, {}].".format(low, high))

    bits = span.bit_length()
    limbs = (bits + 63) // 64

    while True:
        value = 0
        for limb in rng.integers(0, 2 ** 64, size=limbs, dtype=np.uint64):
            value = (value << 64) | int(limb)

        value >>= limbs * 64 - bits
        if value < span:
            return low + value

class DiscreteRun:
    """
    The terminal pieces of one discrete decomposition.
    """

    def __init__(self,
                 trial: int,
                 initial_length: int,
                 histogram: DigitHistogram,
                 n_stopped_on_sequence: int,
                 n_ones: int,
                 total_length: int,
                 pieces: Optional[List[int]] = None) -> None:
        self._trial = trial
        self._initial_length = initial_length
        self._histogram = histogram
        self._n_stopped_on_sequence = n_stopped_on_sequence
        self._n_ones = n_ones
        self._total_length = total_length
        self._pieces = pieces
        self._gof: Optional[GofReport] = None

    @property
    def trial(self) -> int:
        """
        The index of the trial.
        """

        return self._trial

    @property
    def initial_length(self) -> int:
        """
        The length L of the stick.
        """

        return self._initial_length

    @property
    def histogram(self) -> DigitHistogram:
        """
        The first-digit histogram of the terminal pieces.
        """

        return self._histogram

    @property
    def n_pieces(self) -> int:
        """
        The number of terminal pieces.
        """

        return int(round(self._histogram.total))

    @property
    def n_stopped_on_sequence(self) -> int:
        """
        The number of terminal pieces whose length is a term of the stopping sequence.
        """

        return self._n_stopped_on_sequence

    @property
    def n_ones(self) -> int:
        """
        The number of terminal pieces of length 1.
        """

        return self._n_ones

    @property
    def total_length(self) -> int:
        """
        The sum of the terminal lengths, which equals the initial length.
        """

        return self._total_length

    @property
    def pieces(self) -> Optional[List[int]]:
        """
        The terminal lengths, if they were kept.
        """

        return None if self._pieces is None else list(self._pieces)

    def gof(self) -> GofReport:
        """
        Returns the goodness-of-fit report of the terminal first digits against Benford's law.
        """

        if self._gof is None:
            self._gof = chi_square_benford(self._histogram)

        return self._gof

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the per-trial summary.
        """

        return {"trial_id": self._trial,
                "n_pieces": self.n_pieces,
                "n_stopped_on_sequence": self._n_stopped_on_sequence,
                "n_ones": self._n_ones,
                "chi_square": self.gof().chi_square}

class _Accumulator:
    def __init__(self, sequence: StoppingSequence, max_pieces: int, keep_pieces: bool) -> None:
        self.sequence = sequence
        self.max_pieces = max_pieces
        self.digit_counts = np.zeros(9, dtype=np.int64)
        self.n_pieces = 0
        self.n_stopped_on_sequence = 0
        self.n_ones = 0
        self.total_length = 0
        self.pieces: Optional[List[int]] = [] if keep_pieces else None

    def check_guard(self, pending: int = 0) -> None:
        if self.n_pieces + pending > self.max_pieces:
            msg = ("The decomposition exceeded {} pieces; raise max_pieces or choose a smaller length."
                   .format(self.max_pieces))
            logging.error(msg)
            raise NumericFailure(msg)

    def add_big(self, length: int) -> None:
        self.n_pieces += 1
        self.check_guard()

        self.digit_counts[first_digit_big(length) - 1] += 1
        self.n_stopped_on_sequence += int(self.sequence.contains(length))
        self.n_ones += int(length == 1)
        self.total_length += length

        if self.pieces is not None:
            self.pieces.append(length)

    def add_small(self, lengths: np.ndarray, on_sequence: np.ndarray) -> None:
        self.n_pieces += lengths.size
        self.check_guard()

        self.digit_counts += np.bincount(first_digits_int64(lengths) - 1, minlength=9)
        self.n_stopped_on_sequence += int(np.count_nonzero(on_sequence))
        self.n_ones += int(np.count_nonzero(lengths == 1))
        self.total_length += int(np.sum(lengths))

        if self.pieces is not None:
            self.pieces.extend(int(length) for length in lengths)

def _decompose_batch(batch: List[int],
                     rng: np.random.Generator,
                     accumulator: _Accumulator) -> None:
    frontier = np.array(batch, dtype=np.int64)

    while frontier.size > 0:
        on_sequence = accumulator.sequence.contains_array(frontier)
        stopping = on_sequence | (frontier == 1)

        accumulator.add_small(frontier[stopping], on_sequence[stopping])

        active = frontier[~stopping]
        if active.size == 0:
            break

        accumulator.check_guard(2 * active.size)

        cuts = rng.integers(1, active)
        frontier = np.concatenate((cuts, active - cuts))

def simulate_discrete(length: int,
                      sequence: StoppingSequence,
                      seed: int = fraglaw.defaults.SEED,
                      trial: int = 0,
                      max_pieces: int = fraglaw.defaults.MAX_DISCRETE_PIECES,
                      keep_pieces: bool = False) -> DiscreteRun:
    """
    Decomposes a stick of integer length until every piece has stopped.

    Args:
        length: The initial length L >= 2.
        sequence: The stopping sequence.
        seed: The run seed.
        trial: The index of the trial.
        max_pieces: The number of terminal pieces after which the run is aborted.
        keep_pieces: Whether to keep the list of terminal lengths.

    Returns:
        The counts of the terminal pieces; their lengths add up to L exactly.

    Raises:
        InvalidArgumentError: If L < 2.
        NumericFailure: If the run produces more than `max_pieces` pieces.
    """

    if length < 2:
        raise InvalidArgumentError("The initial length must be at least 2, got {}.".format(length))

    rng = trial_generator(seed, trial)
    accumulator = _Accumulator(sequence, max_pieces, keep_pieces)

    stack = [length]
    batch: List[int] = []
    batch_total = 0

    while stack:
        current = stack.pop()

        if current < fraglaw.defaults.MATERIALIZATION_THRESHOLD:
            if batch_total + current > BATCH_TOTAL_LIMIT:
                _decompose_batch(batch, rng, accumulator)
                (batch, batch_total) = ([], 0)

            batch.append(current)
            batch_total += current
            continue

        if sequence.contains(current):
            accumulator.add_big(current)
            continue

        accumulator.check_guard(len(stack) + len(batch))
        cut = uniform_big(rng, 1, current - 1)
        stack.append(current - cut)
        stack.append(cut)

    if batch:
        _decompose_batch(batch, rng, accumulator)

    if accumulator.total_length != length:
        msg = "The terminal pieces add up to {} instead of {}.".format(accumulator.total_length, length)
        logging.error(msg)
        raise NumericFailure(msg)

    histogram = DigitHistogram(accumulator.digit_counts.astype(np.float64), float(accumulator.n_pieces))

    return DiscreteRun(trial, length, histogram, accumulator.n_stopped_on_sequence, accumulator.n_ones,
                       accumulator.total_length, accumulator.pieces)

class ChiSquareExperiment:
    """
    The chi-square values of repeated discrete decompositions of the same stick.
    """

    def __init__(self, length: int, sequence: StoppingSequence, runs: List[DiscreteRun]) -> None:
        if len(runs) == 0:
            raise InvalidArgumentError("An experiment needs at least one run.")

        self._length = length
        self._sequence = sequence
        self._runs = runs

    @property
    def runs(self) -> List[DiscreteRun]:
        """
        The runs, in trial order.
        """

        return list(self._runs)

    @property
    def chi_squares(self) -> List[float]:
        """
        The chi-square value of every run.
        """

        return [run.gof().chi_square for run in self._runs]

    def fraction_exceeding(self, critical_value: Optional[float] = None) -> float:
        """
        Returns the fraction of runs whose chi-square value exceeds `critical_value`, by default the 95% quantile of
        the chi-square distribution with 8 degrees of freedom.
        """

        threshold = chi_square_critical_value() if critical_value is None else critical_value
        return sum(1 for value in self.chi_squares if value > threshold) / len(self._runs)

    def summary(self) -> Dict[str, Any]:
        """
        Returns the totals reported for the experiment: pieces, pieces on the stopping sequence, length-1 pieces and
        the chi-square statistics.
        """

        chi_squares = np.array(self.chi_squares)
        digits = len(str(self._length))

        return {"L": str(self._length) if digits > 15 else self._length,
                "stop": self._sequence.kind,
                "trials": len(self._runs),
                "total_pieces": sum(run.n_pieces for run in self._runs),
                "total_stopped_on_sequence": sum(run.n_stopped_on_sequence for run in self._runs),
                "total_ones": sum(run.n_ones for run in self._runs),
                "mean_chi_square": float(np.mean(chi_squares)),
                "critical_value": chi_square_critical_value(),
                "fraction_exceeding_critical": self.fraction_exceeding()}

    def to_csv(self, manifest_hash: Optional[str] = None) -> str:
        """
        Returns the per-trial CSV `trial_id,n_pieces,n_stopped_on_sequence,n_ones,chi_square`.
        """

        text = io.StringIO()
        if manifest_hash is not None:
            text.write("# manifest: {}\n".format(manifest_hash))

        text.write("trial_id,n_pieces,n_stopped_on_sequence,n_ones,chi_square\n")
        for run in self._runs:
            row = run.to_dict()
            text.write("{},{},{},{},{!r}\n".format(row["trial_id"], row["n_pieces"], row["n_stopped_on_sequence"],
                                                   row["n_ones"], row["chi_square"]))

        return text.getvalue()

def chi_square_experiment(length: int,
                          sequence: StoppingSequence,
                          trials: int,
                          seed: int = fraglaw.defaults.SEED,
                          threads: Optional[int] = None,
                          max_pieces: int = fraglaw.defaults.MAX_DISCRETE_PIECES) -> ChiSquareExperiment:
    """
    Runs `trials` independent decompositions of a stick of length L and computes the chi-square value of each.

    Raises:
        InvalidArgumentError: If `trials` is smaller than 1.
    """

    if trials < 1:
        raise InvalidArgumentError("At least one trial is needed, got {}.".format(trials))

    runs = run_trials(lambda trial: simulate_discrete(length, sequence, seed, trial, max_pieces), trials, threads)
    experiment = ChiSquareExperiment(length, sequence, runs)

    logging.info("Discrete experiment with %s stopping: %s trials, mean chi-square %s.",
                 sequence.kind, trials, experiment.summary()["mean_chi_square"])

    return experiment
