#!/usr/bin/env python3

# pylint: disable=missing-docstring

import math
import unittest

import numpy as np

from fraglaw.densities import LogBoxDensity, PiecewiseConstantDensity, UniformDensity
from fraglaw.errors import InvalidArgumentError
from fraglaw.mellin import (condition_sum_tail, counterexample_schedule, EpsilonSchedule, fourier_coefficient_logbox,
                            mellin_condition_sum, mellin_condition_sum_varying, mellin_frequency, mellin_transform,
                            mellin_transform_quadrature, product_error_bound_uniform, telescoping_lower_bound, zeta,
                            zeta_minus_one)

class TestMellinTransform(unittest.TestCase):
    def test_uniform_modulus(self) -> None:
        value = mellin_transform(UniformDensity(), 1)
        t = mellin_frequency(1)

        self.assertAlmostEqual(1.0 / math.sqrt(1.0 + t * t), value.modulus, places=12)
        self.assertAlmostEqual(0.3441, value.modulus, places=4)

    def test_conjugate_symmetry(self) -> None:
        density = PiecewiseConstantDensity([0.0, 0.3, 1.0], [0.5, 1.0 / 0.7 * 0.85])
        positive = mellin_transform(density, 2).value
        negative = mellin_transform(density, -2).value

        self.assertAlmostEqual(positive.conjugate(), negative, places=12)

    def test_quadrature_agrees_with_closed_forms(self) -> None:
        densities = [UniformDensity(),
                     PiecewiseConstantDensity([0.0, 0.5, 1.0], [1.5, 0.5]),
                     LogBoxDensity(0.2)]

        for density in densities:
            for ell in (1, 3):
                closed = mellin_transform(density, ell, method="closed").value
                numeric = mellin_transform_quadrature(density, ell).value

                self.assertLess(abs(closed - numeric), 1e-7, "{} at ell = {}".format(density, ell))

    def test_uniform_quadrature_matches_the_closed_form(self) -> None:
        for ell in range(1, 51):
            closed = mellin_transform(UniformDensity(), ell, method="closed").value
            numeric = mellin_transform_quadrature(UniformDensity(), ell).value

            self.assertLess(abs(closed - numeric), 1e-10, "ell = {}".format(ell))

    def test_reflected_piecewise_density(self) -> None:
        density = PiecewiseConstantDensity([0.0, 0.5, 1.0], [1.5, 0.5])
        reflected = mellin_transform(density.reflected(), 1).value
        numeric = mellin_transform_quadrature(density.reflected(), 1).value

        self.assertLess(abs(reflected - numeric), 1e-7)

    def test_moduli_are_at_most_one(self) -> None:
        for ell in range(1, 20):
            self.assertLessEqual(mellin_transform(LogBoxDensity(0.01), ell).modulus, 1.0)

    def test_ell_zero_is_rejected(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            mellin_transform(UniformDensity(), 0)

        with self.assertRaises(InvalidArgumentError):
            mellin_transform(UniformDensity(), 1, method="fourier")

class TestConditionSums(unittest.TestCase):
    def test_condition_sum_decays_in_levels(self) -> None:
        density = PiecewiseConstantDensity([0.0, 0.5, 1.0], [1.5, 0.5])
        reflected = density.reflected()

        sums = [mellin_condition_sum(density, reflected, levels, ell_max=20) for levels in (2, 4, 8, 16)]

        self.assertTrue(all(later < earlier for (earlier, later) in zip(sums, sums[1:])))

    def test_varying_sum_of_uniforms(self) -> None:
        densities = [UniformDensity()] * 3
        expected = 2.0 * sum((1.0 + mellin_frequency(ell) ** 2) ** -1.5 for ell in range(1, 51))

        self.assertAlmostEqual(expected, mellin_condition_sum_varying(densities, ell_max=50), places=12)

    def test_tail(self) -> None:
        self.assertEqual(math.inf, condition_sum_tail([UniformDensity()], ell_max=10))

        tail = condition_sum_tail([UniformDensity()] * 4, ell_max=100)
        self.assertGreater(tail, 0.0)
        self.assertLess(tail, 1e-6)

class TestUniformBound(unittest.TestCase):
    def test_zeta(self) -> None:
        self.assertAlmostEqual(math.pi ** 2 / 6.0, zeta(2), places=12)
        self.assertAlmostEqual(math.pi ** 4 / 90.0, zeta(4), places=12)
        self.assertAlmostEqual(0.0009945751278180853, zeta_minus_one(10), places=15)

        with self.assertRaises(InvalidArgumentError):
            zeta(1)

    def test_bound_for_ten_factors(self) -> None:
        self.assertAlmostEqual(1.43e-5, product_error_bound_uniform(10, 2.0), delta=0.01e-5)

    def test_bound_vanishes_at_one(self) -> None:
        self.assertEqual(0.0, product_error_bound_uniform(5, 1.0))

    def test_bound_decreases(self) -> None:
        bounds = [product_error_bound_uniform(levels, 5.0) for levels in range(4, 20)]

        self.assertTrue(all(later < earlier for (earlier, later) in zip(bounds, bounds[1:])))

    def test_invalid_arguments(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            product_error_bound_uniform(3, 2.0)

        with self.assertRaises(InvalidArgumentError):
            product_error_bound_uniform(10, 10.0)

class TestEpsilonSchedule(unittest.TestCase):
    def test_schedule_is_decreasing_and_summable(self) -> None:
        schedule = counterexample_schedule(0.5, 25)
        epsilons = schedule.epsilons

        self.assertTrue(all(later < earlier for (earlier, later) in zip(epsilons, epsilons[1:])))
        self.assertLess(2.0 * sum(epsilons) * math.log(10.0), 0.5)

    def test_partial_products_stay_above_one_half(self) -> None:
        schedule = EpsilonSchedule(0.5, 25)
        products = schedule.fourier_partial_products(25)

        for levels in range(1, 26):
            self.assertGreaterEqual(products[levels - 1], telescoping_lower_bound(levels) - 1e-12)

        self.assertGreater(products[-1], 0.5)

    def test_fourier_coefficient(self) -> None:
        coefficient = fourier_coefficient_logbox(0.01, 1)
        argument = 2.0 * math.pi * 0.01

        self.assertAlmostEqual(math.sin(argument) / argument, abs(coefficient), places=12)

    def test_fourier_coefficient_of_a_narrow_box(self) -> None:
        epsilon = 0.01
        expansion = abs(-1.0 + 2.0 * math.pi ** 2 * epsilon ** 2 / 3.0)

        self.assertAlmostEqual(0.99934, abs(fourier_coefficient_logbox(epsilon, 1)), places=5)
        self.assertAlmostEqual(expansion, abs(fourier_coefficient_logbox(epsilon, 1)), delta=1e-6)
        self.assertAlmostEqual(0.98363, abs(fourier_coefficient_logbox(0.05, 1)), places=5)

    def test_fourier_coefficient_is_the_mellin_transform_of_the_box(self) -> None:
        for epsilon in (0.01, 0.05, 0.2):
            density = LogBoxDensity(epsilon)

            for ell in range(1, 6):
                coefficient = fourier_coefficient_logbox(epsilon, ell)

                self.assertLess(abs(coefficient - mellin_transform(density, ell).value), 1e-12)
                self.assertLess(abs(coefficient - mellin_transform_quadrature(density, ell).value), 1e-7)

    def test_schedule_keeps_the_fourier_product_away_from_zero(self) -> None:
        schedule = EpsilonSchedule(0.5, 1000)
        products = schedule.fourier_partial_products(1000)

        for levels in range(1, 1001):
            self.assertGreaterEqual(products[levels - 1], telescoping_lower_bound(levels) - 1e-12)

        self.assertGreaterEqual(products[199], 0.5)
        self.assertGreaterEqual(products[-1], 0.5)

    def test_densities(self) -> None:
        densities = EpsilonSchedule(0.2, 10).densities(3)

        self.assertEqual(3, len(densities))
        self.assertAlmostEqual(EpsilonSchedule(0.2, 10).epsilon(2), densities[1].epsilon)

    def test_telescoping_bound(self) -> None:
        product = float(np.prod([n * (n + 2) / (n + 1) ** 2 for n in range(1, 11)]))

        self.assertAlmostEqual(product, telescoping_lower_bound(10), places=12)

    def test_invalid_delta(self) -> None:
        with self.assertRaises(InvalidArgumentError):
            EpsilonSchedule(1.5, 10)
