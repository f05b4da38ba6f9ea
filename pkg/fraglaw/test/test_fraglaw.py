#!/usr/bin/env python3

# pylint: disable=missing-docstring

import contextlib
import io
import json
import math
from pathlib import Path
from typing import List, Tuple

import numpy as np

from fraglaw.fraglaw import EXIT_CONFIGURATION_ERROR, EXIT_NUMERIC_FAILURE, EXIT_SUCCESS, run

from .temp_dir_test_case import TmpDirTestCase

class TestCommandLine(TmpDirTestCase):
    def _run(self, argv: List[str]) -> Tuple[int, str]:
        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            exit_code = run(argv)

        return (exit_code, output.getvalue())

    def _load_json(self, path: Path) -> dict:
        with path.open() as file:
            return json.load(file)

    def test_simulate_unrestricted(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["simulate", "unrestricted", "--levels", "8", "--trials", "2",
                                         "--s", "2.5", "--out", str(out_dir)])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("unrestricted: N=8", output)

        for name in ("manifest.json", "histogram.json", "gof.json", "pn.csv", "digits.csv", "trials.csv"):
            self.assertTrue((out_dir / name).is_file(), name)

        manifest = self._load_json(out_dir / "manifest.json")
        histogram = self._load_json(out_dir / "histogram.json")

        self.assertEqual(manifest["manifest_hash"], histogram["manifest_hash"])
        self.assertEqual(512.0, histogram["histogram"]["total"])
        self.assertEqual(2.5, manifest["config"]["s"])
        self.assertTrue((out_dir / "pn.csv").read_text().startswith("# manifest: " + manifest["manifest_hash"]))

    def test_same_manifest_gives_identical_files(self) -> None:
        argv = ["simulate", "unrestricted", "--levels", "10", "--seed", "99", "--trials", "3"]
        self._run(argv + ["--out", str(self._out_dir("first"))])
        self._run(argv + ["--out", str(self._out_dir("second"))])

        for name in ("histogram.json", "gof.json", "pn.csv", "trials.csv"):
            self.assertEqual((self._out_dir("first") / name).read_text(),
                             (self._out_dir("second") / name).read_text(), name)

    def test_configuration_file_and_overrides(self) -> None:
        config_path = self._tmp_dir_path / "run.yaml"
        config_path.write_text("levels: 6\nseed: 5\ndensity:\n  kind: logbox\n  epsilon: 0.1\n")

        out_dir = self._out_dir()
        (exit_code, _) = self._run(["simulate", "unrestricted", "-c", str(config_path), "--levels", "7",
                                    "--out", str(out_dir)])

        manifest = self._load_json(out_dir / "manifest.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(7, manifest["config"]["levels"])
        self.assertEqual(5, manifest["seed"])
        self.assertEqual("logbox", manifest["config"]["density"]["kind"])

    def test_simulate_unrestricted_series(self) -> None:
        out_dir = self._out_dir()
        (exit_code, _) = self._run(["simulate", "unrestricted", "--levels", "4", "--trials", "3",
                                    "--levels-series", "4", "6", "--out", str(out_dir)])

        lines = (out_dir / "series.csv").read_text().splitlines()

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual("levels,s,mean,variance", lines[1])
        self.assertEqual(4, len(lines))

    def test_simulate_restricted(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["simulate", "restricted", "--levels", "1000", "--out", str(out_dir)])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("restricted: N=1000", output)
        self.assertEqual(1000.0, self._load_json(out_dir / "histogram.json")["histogram"]["total"])

    def test_simulate_fixed_rational(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["simulate", "fixed", "--p", repr(1.0 / 11.0), "--levels", "200",
                                         "--levels-series", "10", "100", "--out", str(out_dir)])

        rationality = self._load_json(out_dir / "rationality.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertTrue(rationality["rational"])
        self.assertEqual(1, rationality["q"])
        self.assertEqual(1, rationality["significand_classes"])
        self.assertTrue((out_dir / "convergence.csv").is_file())
        self.assertIn("rational", output)

    def test_simulate_fixed_irrational(self) -> None:
        (exit_code, output) = self._run(["simulate", "fixed", "--p", "0.3", "--levels", "1000",
                                         "--out", str(self._out_dir())])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("y irrational up to q_max=1000", output)

    def test_simulate_discrete(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["simulate", "discrete", "--L", "1e4", "--stop", "primes", "--trials", "3",
                                         "--out", str(out_dir)])

        summary = self._load_json(out_dir / "summary.json")
        trial_lines = (out_dir / "trials.csv").read_text().splitlines()

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("discrete: stop=primes, L=10000", output)
        self.assertEqual(3, summary["trials"])
        self.assertEqual(5, len(trial_lines))

    def test_simulate_discrete_huge_length(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["simulate", "discrete", "--L", "10^40",
                                         "--stop", "evens", "--out", str(out_dir)])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("41-digit", output)
        self.assertEqual(str(10 ** 40), self._load_json(out_dir / "manifest.json")["config"]["L"])

    def test_simulate_determinant(self) -> None:
        out_dir = self._out_dir()
        (exit_code, _) = self._run(["simulate", "determinant", "--n", "5", "--trials", "2", "--pairs", "1000",
                                    "--out", str(out_dir)])

        histogram = self._load_json(out_dir / "histogram.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(240.0, histogram["histogram"]["total"])
        self.assertEqual(1000, sum(histogram["shared_factors"]["counts"]))
        self.assertAlmostEqual(44.0 / 120.0, histogram["shared_factors"]["exact"][0])
        self.assertFalse((out_dir / "pn.csv").exists())

    def test_configuration_errors(self) -> None:
        cases = [["simulate", "unrestricted", "--levels", "31"],
                 ["simulate", "unrestricted"],
                 ["simulate", "unrestricted", "--levels", "5", "--density", "{kind: beta}"],
                 ["simulate", "restricted", "--levels", "5", "--s", "10"],
                 ["simulate", "fixed", "--levels", "5", "--p", "1.5"],
                 ["simulate", "discrete", "--L", "ten"],
                 ["simulate", "determinant", "--n", "11"],
                 ["simulate", "unrestricted", "--levels", "5", "-c", str(self._tmp_dir_path / "missing.yaml")]]

        for argv in cases:
            (exit_code, _) = self._run(argv + ["--out", str(self._out_dir())])
            self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code, " ".join(argv))

        self.assertFalse(self._out_dir().exists())

    def test_type_error_in_configuration_file(self) -> None:
        config_path = self._tmp_dir_path / "run.yaml"
        config_path.write_text("levels: ten\n")

        (exit_code, _) = self._run(["simulate", "unrestricted", "-c", str(config_path), "--out", str(self._out_dir())])

        self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code)

    def test_usage_error(self) -> None:
        with self.assertRaises(SystemExit) as context:
            self._run(["simulate", "tree"])

        self.assertEqual(2, context.exception.code)

    def test_numeric_failure(self) -> None:
        (exit_code, _) = self._run(["simulate", "discrete", "--L", "1000000", "--stop", "primes",
                                    "--max-pieces", "10", "--out", str(self._out_dir())])

        self.assertEqual(EXIT_NUMERIC_FAILURE, exit_code)

    def test_bound(self) -> None:
        (exit_code, output) = self._run(["bound", "--levels", "10", "--s", "2"])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("uniform bound", output)
        self.assertIn("1.43", output)
        self.assertIn("general bound", output)

    def test_bound_with_simulation(self) -> None:
        (exit_code, output) = self._run(["bound", "--levels", "5", "--samples", "10000"])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("simulated: Prob(S <= 2.0)", output)

    def test_bound_for_other_densities(self) -> None:
        (exit_code, output) = self._run(["bound", "--levels", "3", "--density", "{kind: logbox, epsilon: 0.1}",
                                         "--ell-max", "20"])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertNotIn("uniform bound", output)

    def test_bound_below_four_uniform_factors(self) -> None:
        (exit_code, _) = self._run(["bound", "--levels", "3"])

        self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code)

    def test_counterexample(self) -> None:
        out_dir = self._out_dir()
        (exit_code, output) = self._run(["counterexample", "--delta", "0.5", "--levels", "12",
                                         "--out", str(out_dir)])

        report = self._load_json(out_dir / "counterexample.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("counterexample: delta=0.5, N=12", output)
        self.assertLessEqual(report["max_min_ratio"], math.exp(0.5))
        self.assertGreaterEqual(report["fourier_partial_product"], report["telescoping_lower_bound"])

    def test_counterexample_limits(self) -> None:
        self.assertEqual(EXIT_CONFIGURATION_ERROR, self._run(["counterexample", "--delta", "0.5", "--levels", "26"])[0])
        self.assertEqual(EXIT_CONFIGURATION_ERROR, self._run(["counterexample", "--delta", "1.5", "--levels", "5"])[0])

    def test_analyze(self) -> None:
        pieces_path = self._tmp_dir_path / "pieces.npy"
        np.save(str(pieces_path), np.random.default_rng(1).uniform(-3.0, 0.0, 5000))

        out_dir = self._out_dir()
        (exit_code, output) = self._run(["analyze", str(pieces_path), "--out", str(out_dir)])

        gof = self._load_json(out_dir / "gof.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertIn("analyze: 5000 pieces", output)
        self.assertLess(gof["ks_distance"], 0.05)
        self.assertTrue((out_dir / "discrepancy.json").is_file())

    def test_analyze_weighted_csv(self) -> None:
        pieces_path = self._tmp_dir_path / "pieces.csv"
        pieces_path.write_text("# log10 length, weight\n{},2\n{},1\n".format(math.log10(0.15), math.log10(0.3)))

        out_dir = self._out_dir()
        (exit_code, _) = self._run(["analyze", str(pieces_path), "--out", str(out_dir)])

        histogram = self._load_json(out_dir / "histogram.json")["histogram"]

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(3.0, histogram["total"])
        self.assertEqual(2.0, histogram["digits"][0])

    def test_analyze_missing_file(self) -> None:
        (exit_code, _) = self._run(["analyze", str(self._tmp_dir_path / "missing.npy")])

        self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code)

    def test_report(self) -> None:
        for seed in ("1", "2"):
            self._run(["simulate", "unrestricted", "--levels", "6", "--seed", seed,
                       "--out", str(self._out_dir("run" + seed))])

        out_dir = self._out_dir("merged")
        (exit_code, _) = self._run(["report", str(self._out_dir("run1")), str(self._out_dir("run2")),
                                    "--out", str(out_dir)])

        report = self._load_json(out_dir / "report.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(128.0, report["total"])
        self.assertEqual(2, len(report["sources"]))
        self.assertNotEqual(report["sources"][0]["manifest_hash"], report["sources"][1]["manifest_hash"])

    def test_report_rejects_mixed_models(self) -> None:
        self._run(["simulate", "unrestricted", "--levels", "6", "--out", str(self._out_dir("first"))])
        self._run(["simulate", "restricted", "--levels", "6", "--out", str(self._out_dir("second"))])

        (exit_code, _) = self._run(["report", str(self._out_dir("first")), str(self._out_dir("second")),
                                    "--out", str(self._out_dir("merged"))])

        self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code)

    def test_report_keeps_large_and_small_weights(self) -> None:
        pieces_path = self._tmp_dir_path / "pieces.csv"
        pieces_path.write_text("{},1e20\n{},1e-05\n".format(math.log10(0.15), math.log10(0.3)))

        self._run(["analyze", str(pieces_path), "--out", str(self._out_dir("analyzed"))])
        (exit_code, _) = self._run(["report", str(self._out_dir("analyzed")), "--out", str(self._out_dir())])

        merged = self._load_json(self._out_dir() / "histogram.json")["histogram"]

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(1e20, merged["digits"][0])
        self.assertEqual(1e-05, merged["digits"][2])

    def test_explicit_zero_values_are_rejected(self) -> None:
        cases = [["simulate", "unrestricted", "--levels", "5", "--trials", "0"],
                 ["simulate", "unrestricted", "--levels", "5", "--s", "0"],
                 ["simulate", "fixed", "--levels", "5", "--p", "0.3", "--q-max", "0"],
                 ["simulate", "fixed", "--levels", "5", "--p", "0.3", "--tol", "0"],
                 ["simulate", "discrete", "--L", "1001", "--trials", "0"],
                 ["simulate", "discrete", "--L", "1001", "--max-pieces", "0"],
                 ["simulate", "discrete", "--L", "1001", "--seed", "-1"],
                 ["simulate", "determinant", "--n", "4", "--trials", "0"]]

        for argv in cases:
            (exit_code, _) = self._run(argv + ["--out", str(self._out_dir())])
            self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code, " ".join(argv))

        self.assertFalse(self._out_dir().exists())

    def test_empty_choices_in_configuration_file_are_rejected(self) -> None:
        config_path = self._tmp_dir_path / "run.yaml"
        config_path.write_text("stop: ''\nmode: ''\n")

        for argv in (["simulate", "discrete", "--L", "1001"], ["simulate", "determinant", "--n", "4"]):
            (exit_code, _) = self._run(argv + ["-c", str(config_path), "--out", str(self._out_dir())])
            self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code, " ".join(argv))

    def test_seed_zero_is_kept(self) -> None:
        out_dir = self._out_dir()
        (exit_code, _) = self._run(["simulate", "discrete", "--L", "1001", "--seed", "0", "--trials", "1",
                                    "--out", str(out_dir)])

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(0, self._load_json(out_dir / "manifest.json")["seed"])

    def test_simulate_from_manifest(self) -> None:
        runs = [(["simulate", "unrestricted", "--levels", "6", "--seed", "11", "--trials", "2",
                  "--density", "{kind: counterexample, delta: 0.5}"], ("histogram.json", "pn.csv", "trials.csv")),
                (["simulate", "fixed", "--p", "0.3", "--levels", "50", "--tol", "1e-05"],
                 ("histogram.json", "gof.json", "rationality.json")),
                (["simulate", "discrete", "--L", "10001", "--stop", "primes", "--trials", "2", "--seed", "0"],
                 ("histogram.json", "trials.csv", "summary.json")),
                (["simulate", "determinant", "--n", "4", "--trials", "2", "--pairs", "100"],
                 ("histogram.json", "gof.json"))]

        for (index, (argv, names)) in enumerate(runs):
            first = self._out_dir("first{}".format(index))
            second = self._out_dir("second{}".format(index))

            self.assertEqual(EXIT_SUCCESS, self._run(argv + ["--out", str(first)])[0], " ".join(argv))
            (exit_code, _) = self._run(["simulate", "--manifest", str(first / "manifest.json"),
                                        "--out", str(second)])

            self.assertEqual(EXIT_SUCCESS, exit_code, " ".join(argv))
            self.assertEqual(self._load_json(first / "manifest.json")["manifest_hash"],
                             self._load_json(second / "manifest.json")["manifest_hash"])

            for name in names:
                self.assertEqual((first / name).read_text(), (second / name).read_text(), name)

    def test_manifest_flags_override(self) -> None:
        self._run(["simulate", "unrestricted", "--levels", "6", "--seed", "3", "--out", str(self._out_dir("first"))])
        (exit_code, _) = self._run(["simulate", "unrestricted", "--manifest",
                                    str(self._out_dir("first") / "manifest.json"), "--seed", "4",
                                    "--out", str(self._out_dir("second"))])

        manifest = self._load_json(self._out_dir("second") / "manifest.json")

        self.assertEqual(EXIT_SUCCESS, exit_code)
        self.assertEqual(4, manifest["seed"])
        self.assertEqual(6, manifest["config"]["levels"])

    def test_manifest_errors(self) -> None:
        pieces_path = self._tmp_dir_path / "pieces.npy"
        np.save(str(pieces_path), np.linspace(-2.0, 0.0, 50))
        self._run(["analyze", str(pieces_path), "--out", str(self._out_dir("analyzed"))])
        self._run(["simulate", "restricted", "--levels", "10", "--out", str(self._out_dir("restricted"))])

        cases = [["simulate", "--manifest", str(self._out_dir("analyzed") / "manifest.json")],
                 ["simulate", "unrestricted", "--manifest", str(self._out_dir("restricted") / "manifest.json")],
                 ["simulate", "--manifest", str(self._tmp_dir_path / "missing.json")],
                 ["simulate"]]

        for argv in cases:
            (exit_code, _) = self._run(argv + ["--out", str(self._out_dir())])
            self.assertEqual(EXIT_CONFIGURATION_ERROR, exit_code, " ".join(argv))

        with self.assertRaises(SystemExit) as context:
            self._run(["simulate", "--manifest", "manifest.json", "-c", "run.yaml"])

        self.assertEqual(2, context.exception.code)
