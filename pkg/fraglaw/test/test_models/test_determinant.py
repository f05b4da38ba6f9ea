#!/usr/bin/env python3

# pylint: disable=missing-docstring

import itertools
import math
import unittest

import numpy as np

from fraglaw.errors import InvalidArgumentError
from fraglaw.models.determinant import (derangement_count, determinant_terms, MatrixSample, PermTermSet,
                                        pooled_determinant_terms, rencontres_count, shared_factor_distribution,
                                        term_log10_values)
from fraglaw.trials import trial_generator

class TestMatrixSample(unittest.TestCase):
    def test_term_of_a_permutation(self) -> None:
        sample = MatrixSample(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]))
        terms = sample.term_log10(np.array([[0, 1, 2], [2, 1, 0]]))

        np.testing.assert_allclose(np.log10([45.0, 105.0]), terms)

    def test_invalid_matrices(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            MatrixSample(np.ones((2, 3)))

        with self.assertRaises(InvalidArgumentError):
            MatrixSample(np.array([[1.0, 0.0], [1.0, 1.0]]))

        with self.assertRaises(InvalidArgumentError):
            MatrixSample.draw(1, trial_generator(1, 0))

class TestPermTermSet(unittest.TestCase):
    def test_exhaustive_enumeration(self) -> None:
        terms = PermTermSet(4, block=5)
        rows = np.concatenate(list(terms.blocks()))

        self.assertEqual(24, terms.term_count)
        self.assertEqual(24, len({tuple(row) for row in rows.tolist()}))
        self.assertEqual(list(itertools.permutations(range(4))), [tuple(row) for row in rows.tolist()])

    def test_sampled_permutations(self) -> None:
        terms = PermTermSet(6, "sampled", 1000, block=300)
        rows = np.concatenate(list(terms.blocks(trial_generator(1, 0))))

        self.assertEqual((1000, 6), rows.shape)
        np.testing.assert_array_equal(np.tile(np.arange(6), (1000, 1)), np.sort(rows, axis=1))

    def test_limits(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            PermTermSet(11)

        with self.assertRaises(InvalidArgumentError):
            PermTermSet(20, "sampled")

        with self.assertRaises(InvalidArgumentError):
            PermTermSet(20, "sampled", 10 ** 8 + 1)

        with self.assertRaises(InvalidArgumentError):
            PermTermSet(4, "random")

    def test_sampled_mode_needs_generator(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            list(PermTermSet(4, "sampled", 10).blocks())

class TestDeterminantTerms(unittest.TestCase):
    def test_term_count(self) -> None:
        sample = MatrixSample.draw(5, trial_generator(2, 0))
        histogram = determinant_terms(sample)

        self.assertEqual(120.0, histogram.total)
        self.assertEqual(120, term_log10_values(sample, PermTermSet(5)).size)

    def test_terms_of_large_matrices_approach_benford(self) -> None:
        histogram = pooled_determinant_terms(8, 4, seed=3, threads=2)

        self.assertEqual(4 * math.factorial(8), histogram.total)
        self.assertLess(histogram.max_deviation(), 0.05)

    def test_sampled_terms(self) -> None:
        histogram = pooled_determinant_terms(30, 2, seed=3, mode="sampled", samples=5000)

        self.assertEqual(10000.0, histogram.total)
        self.assertLess(histogram.max_deviation(), 0.05)

    def test_pooling_is_deterministic(self) -> None:
        first = pooled_determinant_terms(6, 3, seed=4, threads=1)
        second = pooled_determinant_terms(6, 3, seed=4, threads=3)

        np.testing.assert_array_equal(first.counts, second.counts)

    def test_exhaustive_terms_of_many_matrices(self) -> None:
        histogram = pooled_determinant_terms(7, 100, seed=12)

        self.assertEqual(100 * 5040, histogram.total)
        self.assertLessEqual(histogram.max_deviation(), 0.01)

    def test_permuting_rows_and_columns_keeps_the_terms(self) -> None:
        rng = trial_generator(13, 0)
        entries = 10.0 ** MatrixSample.draw(6, rng).log10_entries
        original = MatrixSample(entries)
        expected = np.sort(term_log10_values(original, PermTermSet(6)))

        for order in (rng.permutation(6), np.arange(6)[::-1]):
            for permuted in (MatrixSample(entries[order]), MatrixSample(entries[:, order])):
                np.testing.assert_allclose(expected, np.sort(term_log10_values(permuted, PermTermSet(6))),
                                           rtol=0.0, atol=1e-12)
                np.testing.assert_array_equal(determinant_terms(original).counts, determinant_terms(permuted).counts)

class TestFixedPoints(unittest.TestCase):
    def test_derangements(self) -> None:
        self.assertEqual([1, 0, 1, 2, 9, 44, 265], [derangement_count(m) for m in range(7)])

    def test_rencontres(self) -> None:
        self.assertEqual(9, rencontres_count(4, 0))
        self.assertEqual(8, rencontres_count(4, 1))
        self.assertEqual(0, rencontres_count(4, 3))
        self.assertEqual(1, rencontres_count(4, 4))

        for n in range(0, 21):
            self.assertEqual(math.factorial(n), sum(rencontres_count(n, k) for k in range(n + 1)))

    def test_rencontres_limits(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            rencontres_count(21, 0)

        with self.assertRaises(InvalidArgumentError):
            rencontres_count(4, 5)

    def test_shared_factors_match_rencontres(self) -> None:
        n = 6
        distribution = shared_factor_distribution(n, 200000, seed=5)
        exact = np.array([rencontres_count(n, k) / math.factorial(n) for k in range(n + 1)])

        self.assertEqual(200000, distribution.trials)
        np.testing.assert_allclose(exact, distribution.probabilities(), atol=0.005)
        self.assertAlmostEqual(1.0, distribution.mean(), delta=0.01)
        self.assertAlmostEqual(1.0, distribution.variance(), delta=0.02)

    def test_fixed_points_of_large_permutations(self) -> None:
        distribution = shared_factor_distribution(20, 100000, seed=9)

        self.assertTrue(0.95 <= distribution.mean() <= 1.05)

    def test_shared_factor_limits(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            shared_factor_distribution(1, 10)

        with self.assertRaises(InvalidArgumentError):
            shared_factor_distribution(5, 0)
