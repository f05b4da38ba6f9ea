#!/usr/bin/env python3

# pylint: disable=missing-docstring

import unittest

import fraglaw.defaults
from fraglaw.config import (densities_to_config, density_from_dict, get_float, get_int, get_positive_float,
                            get_positive_int, get_seed, get_string, level_densities, load_config_file, resolve)
from fraglaw.densities import LogBoxDensity, PiecewiseConstantDensity, UniformDensity
from fraglaw.errors import ConfigurationError

from .temp_dir_test_case import TmpDirTestCase

class TestConfigFile(TmpDirTestCase):
    def test_load_yaml(self) -> None:
        path = self._tmp_dir_path / "run.yaml"
        path.write_text("levels: 10\ndensity:\n  kind: logbox\n  epsilon: 0.1\n")

        contents = load_config_file(path)

        self.assertEqual(10, contents["levels"])
        self.assertEqual({"kind": "logbox", "epsilon": 0.1}, contents["density"])

    def test_load_json(self) -> None:
        path = self._tmp_dir_path / "run.json"
        path.write_text('{"levels": 4, "seed": 7}')

        self.assertEqual({"levels": 4, "seed": 7}, load_config_file(path))

    def test_json_exponents_are_numbers(self) -> None:
        path = self._tmp_dir_path / "run.json"
        path.write_text('{"tol": 1e-05, "L": 1e+20}')

        contents = load_config_file(path)

        self.assertEqual(1e-05, get_float(contents, "tol"))
        self.assertEqual(10 ** 20, get_int(contents, "L"))

    def test_invalid_json(self) -> None:
        path = self._tmp_dir_path / "run.json"
        path.write_text("levels: 4")

        with self.assertRaises(ConfigurationError):
            load_config_file(path)

    def test_empty_file(self) -> None:
        path = self._tmp_dir_path / "empty.yaml"
        path.write_text("")

        self.assertEqual({}, load_config_file(path))

    def test_missing_file(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            load_config_file(self._tmp_dir_path / "missing.yaml")

        self.assertEqual("<file>", context.exception.field)

    def test_non_mapping(self) -> None:
        path = self._tmp_dir_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        with self.assertRaises(ConfigurationError):
            load_config_file(path)

class TestGetters(unittest.TestCase):
    def test_get_int(self) -> None:
        self.assertEqual(1000000, get_int({"L": 1e6}, "L"))
        self.assertEqual(5, get_int({}, "levels", 5))
        self.assertIsNone(get_int({}, "levels"))

        with self.assertRaises(TypeError):
            get_int({"levels": "ten"}, "levels")

        with self.assertRaises(TypeError):
            get_int({"levels": True}, "levels")

        with self.assertRaises(TypeError):
            get_int({"levels": 2.5}, "levels")

    def test_get_float_and_string(self) -> None:
        self.assertEqual(2.0, get_float({"s": 2}, "s"))
        self.assertEqual("evens", get_string({"stop": "evens"}, "stop"))

        with self.assertRaises(TypeError):
            get_float({"s": "2"}, "s")

        with self.assertRaises(TypeError):
            get_string({"stop": 2}, "stop")

    def test_positive_getters(self) -> None:
        self.assertEqual(7, get_positive_int({"trials": 7}, "trials", 1))
        self.assertEqual(1, get_positive_int({"trials": None}, "trials", 1))
        self.assertEqual(1e-05, get_positive_float({"tol": 1e-05}, "tol", 1e-9))
        self.assertEqual(1e-9, get_positive_float({}, "tol", 1e-9))

        for (key, value) in (("trials", 0), ("trials", -3)):
            with self.assertRaises(ConfigurationError) as context:
                get_positive_int({key: value}, key, 1)

            self.assertEqual(key, context.exception.field)

        for value in (0.0, -1.0, float("inf")):
            with self.assertRaises(ConfigurationError):
                get_positive_float({"tol": value}, "tol", 1e-9)

    def test_get_seed(self) -> None:
        self.assertEqual(0, get_seed({"seed": 0}))
        self.assertEqual(2 ** 64 - 1, get_seed({"seed": 2 ** 64 - 1}))
        self.assertEqual(fraglaw.defaults.SEED, get_seed({}))

        for seed in (-1, 2 ** 64):
            with self.assertRaises(ConfigurationError):
                get_seed({"seed": seed})

class TestDensities(unittest.TestCase):
    def test_density_kinds(self) -> None:
        self.assertIsInstance(density_from_dict({"kind": "uniform"}), UniformDensity)
        self.assertIsInstance(density_from_dict({"kind": "logbox", "epsilon": 0.1}), LogBoxDensity)
        self.assertIsInstance(density_from_dict({"kind": "piecewise",
                                                 "breakpoints": [0, 0.5, 1],
                                                 "heights": [1.5, 0.5]}),
                              PiecewiseConstantDensity)

    def test_unknown_kind_names_the_field(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            density_from_dict({"kind": "beta"}, "density")

        self.assertEqual("density.kind", context.exception.field)

    def test_invalid_density_names_the_field(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            density_from_dict({"kind": "piecewise", "breakpoints": [0, 1], "heights": [2]}, "density")

        self.assertEqual("density", context.exception.field)

        with self.assertRaises(ConfigurationError) as context:
            density_from_dict({"kind": "logbox"}, "density")

        self.assertEqual("density.epsilon", context.exception.field)

    def test_wrong_types(self) -> None:
        with self.assertRaises(TypeError):
            density_from_dict({"kind": "piecewise", "breakpoints": "0 1", "heights": [1]})

        with self.assertRaises(TypeError):
            density_from_dict(["uniform"])  # type: ignore

    def test_level_densities(self) -> None:
        self.assertIsInstance(level_densities(None, 5)[0], UniformDensity)

        configured = level_densities([{"kind": "uniform"}, {"kind": "logbox", "epsilon": 0.1}], 10)
        self.assertEqual(2, len(configured))

        schedule = level_densities({"kind": "counterexample", "delta": 0.5}, 6)
        self.assertEqual(6, len(schedule))
        self.assertTrue(all(isinstance(density, LogBoxDensity) for density in schedule))

    def test_level_densities_errors(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            level_densities([{"kind": "uniform"}, {"kind": "beta"}], 4)

        self.assertEqual("density[1].kind", context.exception.field)

        with self.assertRaises(ConfigurationError) as context:
            level_densities({"kind": "counterexample", "delta": 2.0}, 4)

        self.assertEqual("density.delta", context.exception.field)

        with self.assertRaises(ConfigurationError):
            level_densities([], 4)

    def test_densities_to_config(self) -> None:
        self.assertEqual({"kind": "uniform"}, densities_to_config([UniformDensity()]))
        self.assertEqual(2, len(densities_to_config([UniformDensity(), LogBoxDensity(0.1)])))

class TestResolve(unittest.TestCase):
    def test_command_line_wins(self) -> None:
        resolved = resolve({"levels": 10, "seed": 3}, {"levels": 12, "seed": None})

        self.assertEqual(12, resolved["levels"])
        self.assertEqual(3, resolved["seed"])
        self.assertEqual(1, resolved["trials"])
