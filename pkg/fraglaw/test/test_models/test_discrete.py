#!/usr/bin/env python3

# pylint: disable=missing-docstring

import unittest

import mpmath
import numpy as np
import sympy

from fraglaw.errors import InvalidArgumentError, NumericFailure
from fraglaw.models.discrete import (BigLength, chi_square_experiment, first_digit_big, first_digits_int64,
                                     simulate_discrete, StoppingSequence, stops, uniform_big)
from fraglaw.trials import trial_generator

class TestBigLength(unittest.TestCase):
    def test_parse(self) -> None:
        self.assertEqual(1000001, BigLength.parse("1000001").value)
        self.assertEqual(10 ** 500, BigLength.parse("10^500").value)
        self.assertEqual(2 ** 64, BigLength.parse("2**64").value)
        self.assertEqual(10 ** 6, BigLength.parse("1e6").value)
        self.assertEqual(25 * 10 ** 5, BigLength.parse("2.5e6").value)

    def test_parse_errors(self) -> None:
        for text in ("ten", "1.5", "1e-3", "0", "-4"):
            with self.assertRaises(InvalidArgumentError, msg=text):
                BigLength.parse(text)

class TestFirstDigits(unittest.TestCase):
    def test_big_integers(self) -> None:
        rng = np.random.default_rng(12)
        for digits in (1, 2, 15, 16, 17, 50, 300, 1000):
            for _ in range(20):
                value = int("".join(str(digit) for digit in rng.integers(0, 10, digits))) or 1
                self.assertEqual(int(str(value)[0]), first_digit_big(value), str(value))

    def test_powers_of_ten_boundaries(self) -> None:
        for exponent in range(0, 60):
            self.assertEqual(1, first_digit_big(10 ** exponent))
            if exponent > 0:
                self.assertEqual(9, first_digit_big(10 ** exponent - 1))

    def test_int64(self) -> None:
        values = np.array([1, 9, 10, 99, 100, 999999, 10 ** 15 - 1, 10 ** 15, 2 ** 52 - 1, 2 ** 62], dtype=np.int64)
        expected = [int(str(int(value))[0]) for value in values]

        self.assertEqual(expected, first_digits_int64(values).tolist())

class TestStoppingSequences(unittest.TestCase):
    LIMIT: int = 10 ** 6

    def _assert_array_matches(self, kind: str, expected: np.ndarray) -> None:
        lengths = np.arange(1, TestStoppingSequences.LIMIT, dtype=np.int64)
        result = StoppingSequence(kind).contains_array(lengths)

        np.testing.assert_array_equal(expected, result)

    def test_primes(self) -> None:
        expected = np.array([sympy.isprime(n) for n in range(1, TestStoppingSequences.LIMIT)])
        self._assert_array_matches("primes", expected)

    def test_fibonacci(self) -> None:
        fibonacci = {1, 2}
        (a, b) = (1, 2)
        while b < TestStoppingSequences.LIMIT:
            (a, b) = (b, a + b)
            fibonacci.add(b)

        expected = np.array([n in fibonacci for n in range(1, TestStoppingSequences.LIMIT)])
        self._assert_array_matches("fibonacci", expected)

        sequence = StoppingSequence("fibonacci")
        for n in (1, 2, 3, 5, 8, 832040, 12586269025):
            self.assertTrue(sequence.contains(n))

        for n in (4, 6, 7, 832041):
            self.assertFalse(sequence.contains(n))

    def test_squares_and_powers_of_two(self) -> None:
        squares = np.zeros(TestStoppingSequences.LIMIT - 1, dtype=bool)
        squares[np.arange(1, 1000) ** 2 - 1] = True
        self._assert_array_matches("squares", squares)

        powers = np.zeros(TestStoppingSequences.LIMIT - 1, dtype=bool)
        powers[2 ** np.arange(20) - 1] = True
        self._assert_array_matches("powers_of_two", powers)

    def test_n_log_n(self) -> None:
        terms = set()
        for n in range(2, 100000):
            with mpmath.workdps(40):
                term = int(mpmath.floor(n * mpmath.log(n)))

            if term >= TestStoppingSequences.LIMIT:
                break

            terms.add(term)

        expected = np.array([n in terms for n in range(1, TestStoppingSequences.LIMIT)])
        self._assert_array_matches("n_log_n", expected)

        sequence = StoppingSequence("n_log_n")
        self.assertTrue(sequence.contains(23))
        self.assertFalse(sequence.contains(24))

    def test_big_values(self) -> None:
        self.assertTrue(StoppingSequence("primes").contains(2 ** 89 - 1))
        self.assertFalse(StoppingSequence("primes").contains(2 ** 89 + 1))
        self.assertTrue(StoppingSequence("squares").contains(10 ** 100))
        self.assertTrue(StoppingSequence("powers_of_two").contains(2 ** 200))

    def test_length_one_always_stops(self) -> None:
        for kind in StoppingSequence.KINDS:
            self.assertTrue(stops(StoppingSequence(kind), 1))

    def test_unknown_kind(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            StoppingSequence("odds")

class TestUniformBig(unittest.TestCase):
    def test_range(self) -> None:
        rng = trial_generator(1, 0)
        high = 10 ** 40
        values = [uniform_big(rng, 1, high) for _ in range(1000)]

        self.assertTrue(all(1 <= value <= high for value in values))
        self.assertGreater(max(values), high // 2)

    def test_single_value(self) -> None:
        self.assertEqual(5, uniform_big(trial_generator(1, 0), 5, 5))

class TestSimulateDiscrete(unittest.TestCase):
    def test_even_length_stops_immediately(self) -> None:
        run = simulate_discrete(2, StoppingSequence("evens"))

        self.assertEqual(1, run.n_pieces)
        self.assertEqual(1, run.n_stopped_on_sequence)
        self.assertEqual(0, run.n_ones)

    def test_length_three(self) -> None:
        run = simulate_discrete(3, StoppingSequence("evens"), keep_pieces=True)

        self.assertEqual([1, 2], sorted(run.pieces or []))
        self.assertEqual(1, run.n_ones)
        self.assertEqual(1, run.n_stopped_on_sequence)

    def test_conservation(self) -> None:
        for kind in StoppingSequence.KINDS:
            run = simulate_discrete(100003, StoppingSequence(kind), seed=5, keep_pieces=True)

            self.assertEqual(100003, sum(run.pieces or []), kind)
            self.assertEqual(100003, run.total_length)
            self.assertEqual(run.n_pieces, len(run.pieces or []))

    def test_terminal_pieces_stop(self) -> None:
        sequence = StoppingSequence("primes")
        run = simulate_discrete(10 ** 5, sequence, seed=2, keep_pieces=True)

        self.assertTrue(all(stops(sequence, piece) for piece in run.pieces or []))
        self.assertEqual(run.n_pieces, run.n_stopped_on_sequence + run.n_ones)

    def test_huge_length(self) -> None:
        length = 10 ** 30 + 1
        run = simulate_discrete(length, StoppingSequence("evens"), seed=3, keep_pieces=True)

        self.assertEqual(length, sum(run.pieces or []))
        self.assertEqual(run.n_pieces, run.histogram.total)

    def test_determinism(self) -> None:
        first = simulate_discrete(10 ** 4, StoppingSequence("squares"), seed=9, trial=2, keep_pieces=True)
        second = simulate_discrete(10 ** 4, StoppingSequence("squares"), seed=9, trial=2, keep_pieces=True)

        self.assertEqual(first.pieces, second.pieces)

    def test_piece_guard(self) -> None:
        with self.assertRaises(NumericFailure):
            simulate_discrete(10 ** 6, StoppingSequence("primes"), max_pieces=10)

    def test_invalid_length(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            simulate_discrete(1, StoppingSequence("evens"))

class TestChiSquareExperiment(unittest.TestCase):
    def test_experiment(self) -> None:
        experiment = chi_square_experiment(1000001, StoppingSequence("evens"), 4, seed=1, threads=2)
        summary = experiment.summary()

        self.assertEqual(4, summary["trials"])
        self.assertEqual(4, len(experiment.chi_squares))
        self.assertTrue(0.0 <= summary["fraction_exceeding_critical"] <= 1.0)
        self.assertEqual(summary["total_pieces"], sum(run.n_pieces for run in experiment.runs))

    def test_sparse_sequences_are_far_from_benford(self) -> None:
        baseline = chi_square_experiment(10 ** 6 + 1, StoppingSequence("evens"), 20, seed=4).summary()

        for kind in ("squares", "powers_of_two", "fibonacci"):
            summary = chi_square_experiment(10 ** 6 + 1, StoppingSequence(kind), 20, seed=4).summary()

            self.assertGreaterEqual(summary["fraction_exceeding_critical"], 0.9, kind)
            self.assertGreaterEqual(summary["total_ones"], 10 * max(1, baseline["total_ones"]), kind)

    def test_csv(self) -> None:
        experiment = chi_square_experiment(1001, StoppingSequence("primes"), 2, seed=1, threads=1)
        lines = experiment.to_csv("hash").splitlines()

        self.assertEqual("# manifest: hash", lines[0])
        self.assertEqual("trial_id,n_pieces,n_stopped_on_sequence,n_ones,chi_square", lines[1])
        self.assertEqual(4, len(lines))
        self.assertTrue(lines[2].startswith("0,"))

    def test_big_length_summary(self) -> None:
        experiment = chi_square_experiment(10 ** 20 + 1, StoppingSequence("evens"), 1, seed=1)

        self.assertEqual(str(10 ** 20 + 1), experiment.summary()["L"])

    def test_thread_count_does_not_change_results(self) -> None:
        serial = chi_square_experiment(10 ** 4, StoppingSequence("primes"), 4, seed=6, threads=1)
        parallel = chi_square_experiment(10 ** 4, StoppingSequence("primes"), 4, seed=6, threads=4)

        self.assertEqual(serial.chi_squares, parallel.chi_squares)

    def test_even_stopping_follows_the_chi_square_distribution(self) -> None:
        summary = chi_square_experiment(10 ** 6 + 1, StoppingSequence("evens"), 200, seed=2).summary()

        self.assertEqual(200, summary["trials"])
        self.assertTrue(6.0 <= summary["mean_chi_square"] <= 10.0, summary["mean_chi_square"])
        self.assertLessEqual(summary["fraction_exceeding_critical"], 0.1)
