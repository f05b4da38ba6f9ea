#!/usr/bin/env python3

"""
The main module of the application containing the entry point.
"""

import argparse
import hashlib
import json
import logging
import math
from pathlib import Path
import sys
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
import yaml

import fraglaw.defaults
import fraglaw.output

from fraglaw.config import (get_float, get_int, get_positive_float, get_positive_int, get_seed, get_string,
                            level_densities, load_config_file, resolve)
from fraglaw.errors import ConfigurationError, InvalidArgumentError, NumericFailure
from fraglaw.histogram import DigitHistogram, first_digit_histogram, sum_histograms
from fraglaw.manifest import RunManifest
from fraglaw.mellin import (condition_sum_tail, counterexample_schedule, product_error_bound_general,
                            product_error_bound_uniform, telescoping_lower_bound)
from fraglaw.models.continuous import (FragConfig, simulate_restricted_trials, simulate_unrestricted,
                                       simulate_unrestricted_trials, pn_series, threshold_grid,
                                       uniform_product_experiment)
from fraglaw.models.determinant import (MODES, PermTermSet, pooled_determinant_terms, rencontres_count,
                                        shared_factor_distribution)
from fraglaw.models.discrete import BigLength, StoppingSequence, chi_square_experiment
from fraglaw.models.fixed_proportion import (convergents, detect_rational_y, fixed_proportion_spectrum,
                                             log_ratio_exponent, spectrum_convergence, spectrum_digit_distribution,
                                             spectrum_gof, spectrum_significand_classes)
from fraglaw.output.output import generate_json_text, generate_pn_csv_text, generate_table_text
from fraglaw.stats import chi_square_benford, discrepancy_mod1, GofReport, ks_distance_benford, series_to_csv

SIMULATE_MODELS = ("unrestricted", "restricted", "fixed", "discrete", "determinant")

CONFIG_KEYS = ("levels", "levels_series", "density", "seed", "trials", "s", "p", "q_max", "tol", "stop", "L",
               "max_pieces", "n", "mode", "samples", "pairs")

EXIT_SUCCESS = 0
EXIT_CONFIGURATION_ERROR = 2
EXIT_NUMERIC_FAILURE = 3

class RunOutput(NamedTuple):
    """
    The manifest, the generated files and the one-line summary of a command.
    """

    manifest: RunManifest
    files: Dict[str, str]
    summary: str

def _parse_inline_yaml(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as error:
        raise argparse.ArgumentTypeError("cannot parse {!r}: {}".format(text, error))

def _get_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fraglaw",
                                     description="Simulate stick fragmentation processes and measure how close " +
                                     "the piece lengths come to Benford's law.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debugging information")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    simulate = subparsers.add_parser("simulate", help="run a decomposition model")
    simulate.add_argument("model", nargs="?", choices=SIMULATE_MODELS,
                          help="the decomposition model; taken from the manifest with --manifest")
    sources = simulate.add_mutually_exclusive_group()
    sources.add_argument("-c", "--config", metavar="CONFIG_FILE",
                         help="a YAML or JSON run configuration; flags override its values")
    sources.add_argument("--manifest", metavar="MANIFEST_FILE",
                         help="the manifest.json of an earlier run to repeat; flags override its values")
    simulate.add_argument("-o", "--out", default=fraglaw.defaults.OUTPUT_DIR,
                          help="the directory in which the output files are written")
    simulate.add_argument("--seed", type=int, help="the 64-bit run seed")
    simulate.add_argument("--trials", type=int, help="the number of independent trials (matrices for determinant)")
    simulate.add_argument("--levels", type=int, help="the number of levels N")
    simulate.add_argument("--levels-series", dest="levels_series", type=int, nargs="+", metavar="N",
                          help="also track P_N(s) (unrestricted) or the convergence (fixed) at these N")
    simulate.add_argument("--density", type=_parse_inline_yaml,
                          help="the cut density as inline YAML, for example '{kind: logbox, epsilon: 0.1}'")
    simulate.add_argument("--s", type=float, help="the significand threshold s of P_N(s)")
    simulate.add_argument("--p", type=float, help="the fixed cut proportion")
    simulate.add_argument("--q-max", dest="q_max", type=int, help="the largest denominator tried for y")
    simulate.add_argument("--tol", type=float, help="the tolerance of the rationality search")
    simulate.add_argument("--stop", choices=StoppingSequence.KINDS, help="the stopping sequence")
    simulate.add_argument("--L", dest="L", help="the initial integer length, for example 1000001, 1e6 or 10^500")
    simulate.add_argument("--max-pieces", dest="max_pieces", type=int,
                          help="abort a discrete run after this many pieces")
    simulate.add_argument("--n", type=int, help="the matrix size")
    simulate.add_argument("--mode", choices=MODES, help="how the permutations are chosen")
    simulate.add_argument("--samples", type=int, help="the number of sampled permutations per matrix")
    simulate.add_argument("--pairs", type=int, help="the number of permutation pairs for the shared-factor count")

    bound = subparsers.add_parser("bound", help="print the convergence bounds for products of proportions")
    bound.add_argument("--levels", type=int, required=True, help="the number of factors N")
    bound.add_argument("--s", type=float, default=fraglaw.defaults.THRESHOLD, help="the significand threshold")
    bound.add_argument("--density", type=_parse_inline_yaml, default="uniform",
                       help="the factor density as inline YAML, or 'uniform'")
    bound.add_argument("--ell-max", dest="ell_max", type=int, default=fraglaw.defaults.ELL_MAX,
                       help="the truncation of the Mellin sums")
    bound.add_argument("--samples", type=int,
                       help="also estimate the probability from this many simulated products of uniforms")
    bound.add_argument("--seed", type=int, default=fraglaw.defaults.SEED, help="the 64-bit seed of the estimate")

    counterexample = subparsers.add_parser("counterexample",
                                           help="run the shrinking log-box construction that stays non-Benford")
    counterexample.add_argument("--delta", type=float, required=True, help="the bound on the log-ratio of pieces")
    counterexample.add_argument("--levels", type=int, required=True, help="the number of levels N")
    counterexample.add_argument("--seed", type=int, default=fraglaw.defaults.SEED, help="the 64-bit run seed")
    counterexample.add_argument("-o", "--out", help="if given, the directory in which the report is written")

    analyze = subparsers.add_parser("analyze", help="compute the statistics of a stored piece file")
    analyze.add_argument("pieces_file",
                         help="a .npy or CSV file of log10 piece lengths, optionally with a second weight column")
    analyze.add_argument("-o", "--out", default=fraglaw.defaults.OUTPUT_DIR,
                         help="the directory in which the output files are written")

    report = subparsers.add_parser("report", help="merge the histograms of several runs of the same model")
    report.add_argument("runs", nargs="+", metavar="RUN_DIR", help="output directories of earlier runs")
    report.add_argument("-o", "--out", default=fraglaw.defaults.OUTPUT_DIR,
                        help="the directory in which the merged output is written")

    return parser

def _check_threshold(s: float) -> float:
    if not 1.0 <= s < 10.0:
        raise ConfigurationError("s", "the threshold must lie in [1, 10), got {}.".format(s))

    return s

def _get_threshold(config: Dict[str, Any]) -> float:
    s = get_float(config, "s")
    return _check_threshold(fraglaw.defaults.THRESHOLD if s is None else s)

def _get_choice(config: Dict[str, Any], key: str, default: str) -> str:
    value = get_string(config, key)
    return default if value is None else value

def _get_levels_series(config: Dict[str, Any]) -> Optional[List[int]]:
    value = config.get("levels_series")
    if value is None:
        return None

    if not isinstance(value, list) or not all(map(lambda x: isinstance(x, int) and x >= 1, value)):
        raise ConfigurationError("levels_series", "expected a list of positive integers, got {!r}.".format(value))

    return value

def _get_length(config: Dict[str, Any]) -> int:
    value = config.get("L", fraglaw.defaults.DISCRETE_LENGTH)

    try:
        if isinstance(value, str):
            return BigLength.parse(value).value

        if isinstance(value, float) and value.is_integer():
            return BigLength(int(value)).value

        if isinstance(value, int) and not isinstance(value, bool):
            return BigLength(value).value
    except InvalidArgumentError as error:
        raise ConfigurationError("L", str(error))

    raise TypeError("The 'L' key must be associated with an integer or a string and not {}.".format(type(value)))

def _length_for_json(length: int) -> Any:
    return length if length < 2 ** 53 else str(length)

def _histogram_files(histogram: DigitHistogram, gof: GofReport, manifest: RunManifest,
                     extra: Optional[Dict[str, Any]] = None) -> Dict[str, str]:
    payload: Dict[str, Any] = {"histogram": histogram.to_dict()}
    payload.update(extra or {})

    files = {"histogram.json": generate_json_text(payload, manifest),
             "gof.json": generate_json_text(gof.to_dict(), manifest),
             "digits.csv": histogram.to_csv(manifest.hash())}

    if histogram.cdf_grid is not None:
        files["pn.csv"] = generate_pn_csv_text(histogram, manifest)

    return files

def _simulate_continuous(config: Dict[str, Any]) -> RunOutput:
    frag_config = FragConfig.from_dict(config)
    s = _get_threshold(config)
    series_levels = _get_levels_series(config)

    if series_levels is not None and frag_config.model != "unrestricted":
        raise ConfigurationError("levels_series", "P_N(s) series are only tracked for the unrestricted model.")

    if series_levels is not None and frag_config.trials < 2:
        raise ConfigurationError("trials", "a P_N(s) series needs at least 2 trials for its variance.")

    resolved = frag_config.to_dict()
    resolved.update({"s": s, "levels_series": series_levels})
    manifest = RunManifest("simulate " + frag_config.model, resolved, frag_config.seed)

    grid = threshold_grid(s)
    if frag_config.model == "unrestricted":
        runs: List[Any] = simulate_unrestricted_trials(frag_config, grid=grid)
    else:
        runs = simulate_restricted_trials(frag_config, grid=grid)

    histogram = sum_histograms([run.histogram for run in runs])
    gof = chi_square_benford(histogram)
    values = [run.pn(s) for run in runs]

    files = _histogram_files(histogram, gof, manifest, {"model": frag_config.model, "levels": frag_config.levels})
    rows = [(run.trial, run.pn(s), run.histogram.max_deviation()) for run in runs]
    files["trials.csv"] = generate_table_text(("trial", "pn_s", "max_digit_deviation"), rows, manifest)

    if series_levels is not None:
        series = pn_series(frag_config, series_levels, s)
        files["series.csv"] = series_to_csv(series, manifest.hash())

    summary = ("{}: N={}, {} trials, mean P_N({})={:.5f} (log10 s={:.5f}), chi-square {:.4g}, "
               "max digit deviation {:.4g}").format(frag_config.model, frag_config.levels, len(runs), s,
                                                   float(np.mean(values)), math.log10(s), gof.chi_square,
                                                   gof.max_digit_deviation)

    return RunOutput(manifest, files, summary)

def _simulate_fixed(config: Dict[str, Any]) -> RunOutput:
    p = get_float(config, "p")
    if p is None:
        raise ConfigurationError("p", "the fixed model needs a cut proportion.")

    levels = get_int(config, "levels")
    if levels is None:
        raise ConfigurationError("levels", "the number of levels is required.")

    q_max = get_positive_int(config, "q_max", fraglaw.defaults.RATIONAL_Q_MAX)
    tol = get_positive_float(config, "tol", fraglaw.defaults.RATIONAL_TOLERANCE)
    series_levels = _get_levels_series(config)

    resolved = {"model": "fixed", "p": p, "levels": levels, "q_max": q_max, "tol": tol,
                "levels_series": series_levels}
    manifest = RunManifest("simulate fixed", resolved, 0)

    try:
        spectrum = fixed_proportion_spectrum(levels, p)
    except InvalidArgumentError as error:
        raise ConfigurationError("p" if not 0.0 < p < 1.0 else "levels", str(error))

    histogram = spectrum_digit_distribution(spectrum)
    gof = spectrum_gof(spectrum)
    y = log_ratio_exponent(p)
    rational = detect_rational_y(p, q_max, tol)

    rationality: Dict[str, Any] = {"y": y,
                                   "rational": rational is not None,
                                   "q_max": q_max,
                                   "tol": tol,
                                   "convergents": [list(pair) for pair in convergents(y, 12)],
                                   "significand_classes": spectrum_significand_classes(spectrum)}
    if rational is not None:
        rationality.update({"r": rational.r, "q": rational.q})

    files = _histogram_files(histogram, gof, manifest, {"model": "fixed", "levels": levels, "p": p})
    files["rationality.json"] = generate_json_text(rationality, manifest)

    if series_levels is not None:
        points = spectrum_convergence(p, series_levels)
        files["convergence.csv"] = generate_table_text(("levels", "max_digit_deviation", "discrepancy"),
                                                       [tuple(point) for point in points], manifest)

    if rational is None:
        verdict = "y irrational up to q_max={}".format(q_max)
    else:
        verdict = "y = {}/{} rational with period {}".format(rational.r, rational.q, rational.q)

    summary = "fixed: p={}, N={}, y={:.12g}, {}, max digit deviation {:.4g}".format(
        p, levels, y, verdict, gof.max_digit_deviation)

    return RunOutput(manifest, files, summary)

def _simulate_discrete(config: Dict[str, Any]) -> RunOutput:
    length = _get_length(config)
    stop = _get_choice(config, "stop", "evens")

    try:
        sequence = StoppingSequence(stop)
    except InvalidArgumentError as error:
        raise ConfigurationError("stop", str(error))

    trials = get_positive_int(config, "trials", fraglaw.defaults.TRIALS)
    seed = get_seed(config)
    max_pieces = get_positive_int(config, "max_pieces", fraglaw.defaults.MAX_DISCRETE_PIECES)

    if length < 2:
        raise ConfigurationError("L", "the initial length must be at least 2, got {}.".format(length))

    resolved = {"model": "discrete", "L": _length_for_json(length), "stop": stop, "trials": trials, "seed": seed,
                "max_pieces": max_pieces}
    manifest = RunManifest("simulate discrete", resolved, seed)

    experiment = chi_square_experiment(length, sequence, trials, seed, max_pieces=max_pieces)
    histogram = sum_histograms([run.histogram for run in experiment.runs])
    gof = chi_square_benford(histogram)
    summary_payload = experiment.summary()

    files = _histogram_files(histogram, gof, manifest, {"model": "discrete"})
    files["trials.csv"] = experiment.to_csv(manifest.hash())
    files["summary.json"] = generate_json_text(summary_payload, manifest)

    digits = len(str(length))
    summary = ("discrete: stop={}, L={}, {} trials, mean chi-square {:.4g}, {:.1%} above {:.5g}").format(
        stop, length if digits <= 15 else "{}-digit".format(digits), trials, summary_payload["mean_chi_square"],
        summary_payload["fraction_exceeding_critical"], summary_payload["critical_value"])

    return RunOutput(manifest, files, summary)

def _simulate_determinant(config: Dict[str, Any]) -> RunOutput:
    n = get_int(config, "n")
    if n is None:
        raise ConfigurationError("n", "the determinant model needs a matrix size.")

    mode = _get_choice(config, "mode", "exhaustive")
    samples = get_int(config, "samples")
    matrices = get_positive_int(config, "trials", fraglaw.defaults.TRIALS)
    seed = get_seed(config)
    pairs = get_int(config, "pairs")
    density = level_densities(config.get("density"), 1, "density")[0]

    try:
        terms = PermTermSet(n, mode, samples)
    except InvalidArgumentError as error:
        raise ConfigurationError("n" if mode == "exhaustive" else "samples", str(error))

    resolved = {"model": "determinant", "n": n, "mode": mode, "samples": samples, "trials": matrices,
                "seed": seed, "pairs": pairs, "density": density.to_dict()}
    manifest = RunManifest("simulate determinant", resolved, seed)

    histogram = pooled_determinant_terms(n, matrices, seed, mode, samples, density)
    gof = chi_square_benford(histogram)

    payload: Dict[str, Any] = {"model": "determinant",
                               "n": n,
                               "mode": mode,
                               "term_count": terms.term_count,
                               "matrices": matrices,
                               "max_deviation": histogram.max_deviation()}

    if pairs is not None:
        distribution = shared_factor_distribution(n, pairs, seed)
        shared: Dict[str, Any] = {"pairs": pairs,
                                  "counts": distribution.counts.tolist(),
                                  "mean": distribution.mean(),
                                  "variance": distribution.variance() if pairs >= 2 else None}
        if n <= fraglaw.defaults.MAX_RENCONTRES_SIZE:
            shared["exact"] = [rencontres_count(n, k) / math.factorial(n) for k in range(n + 1)]

        payload["shared_factors"] = shared

    files = _histogram_files(histogram, gof, manifest, payload)

    summary = "determinant: n={}, {} mode, {} terms per matrix, {} matrices, max digit deviation {:.4g}".format(
        n, mode, terms.term_count, matrices, histogram.max_deviation())

    return RunOutput(manifest, files, summary)

SIMULATORS: Dict[str, Callable[[Dict[str, Any]], RunOutput]] = {
    "unrestricted": _simulate_continuous,
    "restricted": _simulate_continuous,
    "fixed": _simulate_fixed,
    "discrete": _simulate_discrete,
    "determinant": _simulate_determinant,
}

def _load_simulate_manifest(path: Path, model: Optional[str]) -> Tuple[str, Dict[str, Any]]:
    manifest = RunManifest.from_dict(_load_json_file(path, "manifest"))
    (command, _, manifest_model) = manifest.command.partition(" ")

    if command != "simulate" or manifest_model not in SIMULATE_MODELS:
        raise ConfigurationError("manifest", "{} does not describe a simulate run, got {!r}."
                                 .format(path, manifest.command))

    if model is not None and model != manifest_model:
        raise ConfigurationError("model", "the manifest describes a {} run, not a {} run."
                                 .format(manifest_model, model))

    if manifest.version != fraglaw.defaults.VERSION:
        logging.warning("The manifest %s was written by version %s; this is version %s.",
                        path, manifest.version, fraglaw.defaults.VERSION)

    return (manifest_model, manifest.config)

def cmd_simulate(args: argparse.Namespace) -> int:
    """
    Runs a decomposition model and writes its histogram, P_N table and goodness-of-fit report. With `--manifest`,
    the run recorded in an earlier manifest is repeated; it reproduces the data files of that run.
    """

    if args.manifest is not None:
        (model, file_config) = _load_simulate_manifest(Path(args.manifest), args.model)
    elif args.model is not None:
        model = args.model
        file_config = load_config_file(args.config) if args.config is not None else {}
    else:
        raise ConfigurationError("model", "a model is required unless --manifest is given.")

    overrides: Dict[str, Any] = {key: getattr(args, key) for key in CONFIG_KEYS}
    overrides["model"] = model

    config = resolve(file_config, overrides)
    logging.info("Running the %s model.", model)

    output = SIMULATORS[model](config)
    fraglaw.output.generate_output(Path(args.out), output.manifest, output.files)

    print(output.summary)
    return EXIT_SUCCESS

def cmd_bound(args: argparse.Namespace) -> int:
    """
    Prints the bound for products of independent uniforms and the truncated general bound.
    """

    _check_threshold(args.s)
    if args.levels < 1:
        raise ConfigurationError("levels", "at least one factor is needed, got {}.".format(args.levels))

    density_value = {"kind": "uniform"} if args.density == "uniform" else args.density
    configured = level_densities(density_value, args.levels, "density")
    densities = [configured[min(level, len(configured) - 1)] for level in range(args.levels)]

    if all(density.kind() == "uniform" for density in densities):
        uniform_bound = product_error_bound_uniform(args.levels, args.s)
        print("uniform bound (N >= 4): |Prob(S <= {}) - log10({})| <= {:.6g}".format(args.s, args.s, uniform_bound))

        if args.samples is not None:
            experiment = uniform_product_experiment(args.levels, args.samples, args.seed, args.s)
            print("simulated: Prob(S <= {}) = {:.6f} from {} products, deviation {:.3g}, standard error {:.3g}"
                  .format(args.s, experiment.probability, experiment.samples, experiment.deviation,
                          experiment.sigma))

    truncated = product_error_bound_general(densities, args.ell_max)
    tail = condition_sum_tail(densities, args.ell_max)
    width = math.log10(args.s)

    print("general bound: log10(s) * (truncated sum + tail) = {:.6g} * ({:.6g} + {:.6g}) = {:.6g}".format(
        width, truncated, tail, width * (truncated + tail)))

    return EXIT_SUCCESS

def cmd_counterexample(args: argparse.Namespace) -> int:
    """
    Runs the unrestricted process with the shrinking log-box densities and reports why it stays non-Benford.
    """

    if not 1 <= args.levels <= fraglaw.defaults.MAX_COUNTEREXAMPLE_LEVELS:
        raise ConfigurationError("levels", "expected 1 <= N <= {}, got {}."
                                 .format(fraglaw.defaults.MAX_COUNTEREXAMPLE_LEVELS, args.levels))

    if not 0.0 < args.delta < 1.0:
        raise ConfigurationError("delta", "delta must lie in (0, 1), got {}.".format(args.delta))

    schedule = counterexample_schedule(args.delta, args.levels)
    frag_config = FragConfig("unrestricted", args.levels, schedule.densities(args.levels), args.seed)
    run = simulate_unrestricted(frag_config)

    products = schedule.fourier_partial_products(args.levels)
    histogram = run.histogram

    report = {"delta": args.delta,
              "levels": args.levels,
              "epsilons": schedule.epsilons,
              "max_min_ratio": run.ratio(),
              "log_ratio": run.log_ratio(),
              "ratio_bound": math.exp(args.delta),
              "populated_digits": histogram.populated_digits(),
              "fourier_partial_product": float(products[-1]),
              "telescoping_lower_bound": telescoping_lower_bound(args.levels)}

    if args.out is not None:
        resolved = {"delta": args.delta, "levels": args.levels, "seed": args.seed}
        manifest = RunManifest("counterexample", resolved, args.seed)
        files = _histogram_files(histogram, chi_square_benford(histogram), manifest, {"model": "counterexample"})
        files["counterexample.json"] = generate_json_text(report, manifest)
        fraglaw.output.generate_output(Path(args.out), manifest, files)

    print("counterexample: delta={}, N={}, max/min ratio {:.9g} (bound e^delta = {:.9g}), digits {}, "
          "Fourier product {:.6f} >= {:.6f}".format(args.delta, args.levels, run.ratio(), math.exp(args.delta),
                                                    histogram.populated_digits(), products[-1],
                                                    telescoping_lower_bound(args.levels)))

    return EXIT_SUCCESS

def _load_pieces(path: Path) -> np.ndarray:
    if not path.is_file():
        raise ConfigurationError("pieces_file", "{} does not exist.".format(path))

    try:
        if path.suffix == ".npy":
            return np.load(str(path), allow_pickle=False)

        return np.loadtxt(str(path), delimiter=",", comments="#", ndmin=2)
    except ValueError as error:
        raise ConfigurationError("pieces_file", "cannot read {}: {}".format(path, error))

def _file_digest(path: Path) -> str:
    with path.open("rb") as file:
        return hashlib.sha256(file.read()).hexdigest()

def cmd_analyze(args: argparse.Namespace) -> int:
    """
    Computes the goodness-of-fit statistics of a stored collection of pieces.
    """

    path = Path(args.pieces_file)
    data = _load_pieces(path)

    if data.ndim == 1 or data.shape[1] == 1:
        (values, weights) = (data.reshape(-1), None)
    elif data.ndim == 2 and data.shape[1] == 2:
        (values, weights) = (data[:, 0], data[:, 1])
    else:
        raise ConfigurationError("pieces_file", "expected one or two columns, got shape {}.".format(data.shape))

    manifest = RunManifest("analyze", {"pieces_file": path.name, "sha256": _file_digest(path)}, 0)

    histogram = first_digit_histogram(values, weights)
    chi_square = chi_square_benford(histogram)
    gof = GofReport(chi_square.chi_square, chi_square.dof, chi_square.max_digit_deviation,
                    ks_distance_benford(values, weights), chi_square.n_pieces, chi_square.log_chi_square)

    files = _histogram_files(histogram, gof, manifest, {"model": "analyze"})
    files["discrepancy.json"] = generate_json_text({"discrepancy_mod1": discrepancy_mod1(values, weights)}, manifest)
    fraglaw.output.generate_output(Path(args.out), manifest, files)

    print("analyze: {} pieces, chi-square {:.4g}, KS distance {:.4g}".format(
        values.size, gof.chi_square, gof.ks_distance))

    return EXIT_SUCCESS

def _load_json_file(path: Path, field: str) -> Dict[str, Any]:
    if not path.is_file():
        raise ConfigurationError(field, "{} does not exist.".format(path))

    with path.open() as file:
        try:
            contents = json.load(file)
        except json.JSONDecodeError as error:
            raise ConfigurationError(field, "cannot parse {}: {}".format(path, error))

    if not isinstance(contents, dict):
        raise ConfigurationError(field, "{} does not contain a mapping.".format(path))

    return contents

def cmd_report(args: argparse.Namespace) -> int:
    """
    Merges the histograms of several runs of the same model and lists the manifests they came from.
    """

    sources: List[Dict[str, str]] = []
    histograms: List[DigitHistogram] = []
    models = set()

    for run_dir in args.runs:
        directory = Path(run_dir)
        manifest = RunManifest.from_dict(_load_json_file(directory / "manifest.json", "runs"))
        contents = _load_json_file(directory / "histogram.json", "runs")

        histogram_dict = contents.get("histogram")
        if not isinstance(histogram_dict, dict):
            raise TypeError("The 'histogram' key must be associated with a value of type `Dict[str, Any]`.")

        histograms.append(DigitHistogram.from_dict(histogram_dict))
        models.add((manifest.command, str(manifest.config.get("model"))))
        sources.append({"path": str(directory), "command": manifest.command, "manifest_hash": manifest.hash()})

    if len(models) != 1:
        raise ConfigurationError("runs", "cannot merge runs of different models: {}.".format(sorted(models)))

    merged = sum_histograms(histograms)
    gof = chi_square_benford(merged)
    report_manifest = RunManifest("report", {"sources": [source["manifest_hash"] for source in sources]}, 0)

    files = _histogram_files(merged, gof, report_manifest, {"model": sorted(models)[0][1]})
    files["report.json"] = generate_json_text({"sources": sources, "total": merged.total}, report_manifest)
    fraglaw.output.generate_output(Path(args.out), report_manifest, files)

    print("report: merged {} runs, total weight {:.6g}, chi-square {:.4g}".format(
        len(sources), merged.total, gof.chi_square))

    return EXIT_SUCCESS

COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "bound": cmd_bound,
    "counterexample": cmd_counterexample,
    "analyze": cmd_analyze,
    "report": cmd_report,
}

def run(argv: Optional[List[str]] = None) -> int:
    """
    Parses the command line, runs the command and returns the exit code: 0 on success, 2 on a usage or
    configuration error and 3 on a numeric failure.
    """

    args = _get_argument_parser().parse_args(argv)
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.INFO)

    try:
        return COMMANDS[args.command](args)
    except (InvalidArgumentError, TypeError) as error:
        logging.error("%s", error)
        return EXIT_CONFIGURATION_ERROR
    except NumericFailure as error:
        logging.error("%s", error)
        return EXIT_NUMERIC_FAILURE

def main() -> None:
    """
    The entry point to the application. Run on the command line with `--help` to get information on usage.
    """

    logging.basicConfig(level=logging.INFO)
    sys.exit(run())

if __name__ == "__main__":
    main()
