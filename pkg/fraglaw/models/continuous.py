#!/usr/bin/env python3

"""
This module contains the continuous decomposition processes of a unit stick.

In the unrestricted process every piece is cut again at every level, so N levels produce the 2^N leaves of a binary
tree; the proportions of a level are drawn from that level's density. In the restricted process only the right-hand
piece is cut again, which leaves N pieces after N - 1 cuts.
"""

import logging
import math
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

import fraglaw.defaults
from fraglaw.config import densities_to_config, get_int, get_positive_int, get_seed, get_string, level_densities
from fraglaw.densities import CutDensity, LN10, LogBoxDensity, open_unit_uniform
from fraglaw.errors import ConfigurationError, InvalidArgumentError, NumericFailure
from fraglaw.histogram import DigitHistogram, first_digit_histogram
from fraglaw.mellin import product_error_bound_uniform
from fraglaw.significand import significands
from fraglaw.stats import TrialSeries
from fraglaw.trials import check_seed, run_trials, trial_generator

class FragConfig:
    """
    The configuration of a continuous decomposition run.
    """

    MODELS = ("unrestricted", "restricted")

    @staticmethod
    def from_dict(dictionary: Dict[str, Any]) -> "FragConfig":
        """
        Creates a new `FragConfig` object from a resolved configuration dictionary.

        Args:
            dictionary: The dictionary with the keys `model`, `levels`, `density`, `seed` and `trials`.

        Returns:
            The created `FragConfig` object.

        Raises:
            TypeError: If a key holds a value of the wrong type.
            ConfigurationError: If a value is invalid; the message names the field.
        """

        model = get_string(dictionary, "model")
        if model not in FragConfig.MODELS:
            raise ConfigurationError("model", "expected one of {}, got {!r}.".format(FragConfig.MODELS, model))

        levels = get_int(dictionary, "levels")
        if levels is None:
            raise ConfigurationError("levels", "the number of levels is required.")

        densities = level_densities(dictionary.get("density"), levels)
        seed = get_seed(dictionary)
        trials = get_positive_int(dictionary, "trials", fraglaw.defaults.TRIALS)

        try:
            FragConfig._check_levels(model, levels)
        except InvalidArgumentError as error:
            raise ConfigurationError("levels", str(error))

        return FragConfig(model, levels, densities, seed, trials)

    @staticmethod
    def _check_levels(model: str, levels: int) -> None:
        if model == "unrestricted" and not 1 <= levels <= fraglaw.defaults.MAX_UNRESTRICTED_LEVELS:
            raise InvalidArgumentError("The unrestricted model needs 1 <= N <= {}, got N = {}."
                                       .format(fraglaw.defaults.MAX_UNRESTRICTED_LEVELS, levels))

        if model == "restricted" and not 2 <= levels <= fraglaw.defaults.MAX_RESTRICTED_LEVELS:
            raise InvalidArgumentError("The restricted model needs 2 <= N <= {}, got N = {}."
                                       .format(fraglaw.defaults.MAX_RESTRICTED_LEVELS, levels))

    def __init__(self,
                 model: str,
                 levels: int,
                 densities: Sequence[CutDensity],
                 seed: int = fraglaw.defaults.SEED,
                 trials: int = fraglaw.defaults.TRIALS) -> None:
        """
        Creates a new `FragConfig` object.

        Args:
            model: Either "unrestricted" or "restricted".
            levels: The number of levels N.
            densities: The densities of the cut proportions; the n-th density is used at level n and the last one
                at every later level.
            seed: The run seed.
            trials: The number of independent trials.

        Raises:
            InvalidArgumentError: If a value is out of range.
        """

        if model not in FragConfig.MODELS:
            raise InvalidArgumentError("Unknown continuous model: {}.".format(model))

        FragConfig._check_levels(model, levels)

        if len(densities) == 0:
            raise InvalidArgumentError("At least one density is needed.")

        if trials < 1:
            raise InvalidArgumentError("At least one trial is needed, got {}.".format(trials))

        self._model = model
        self._levels = levels
        self._densities = list(densities)
        self._seed = check_seed(seed)
        self._trials = trials

    @property
    def model(self) -> str:
        """
        The decomposition model.
        """

        return self._model

    @property
    def levels(self) -> int:
        """
        The number of levels N.
        """

        return self._levels

    @property
    def densities(self) -> List[CutDensity]:
        """
        The configured densities, before recycling the last one.
        """

        return list(self._densities)

    @property
    def seed(self) -> int:
        """
        The run seed.
        """

        return self._seed

    @property
    def trials(self) -> int:
        """
        The number of independent trials.
        """

        return self._trials

    def density_for_level(self, level: int) -> CutDensity:
        """
        Returns the density of the proportions cut at `level` (counted from 1).
        """

        return self._densities[min(level, len(self._densities)) - 1]

    def with_levels(self, levels: int) -> "FragConfig":
        """
        Returns a copy of the configuration with a different number of levels.
        """

        return FragConfig(self._model, levels, self._densities, self._seed, self._trials)

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the configuration dictionary that `from_dict` turns back into this object.
        """

        return {"model": self._model,
                "levels": self._levels,
                "density": densities_to_config(self._densities),
                "seed": self._seed,
                "trials": self._trials}

def log10_proportions(density: CutDensity, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draws `size` proportions p and returns (log10 p, log10 (1 - p)).
    """

    if isinstance(density, LogBoxDensity):
        log10_p = density.sample_log10(rng, size)
        proportions = 10.0 ** log10_p
    else:
        proportions = density.sample(rng, size)
        log10_p = np.log(proportions) / LN10

    return (log10_p, np.log1p(-proportions) / LN10)

def _expand(values: np.ndarray,
            first_level: int,
            depth: int,
            config: FragConfig,
            rng: np.random.Generator) -> np.ndarray:
    for level in range(first_level, first_level + depth):
        (left, right) = log10_proportions(config.density_for_level(level), rng, values.size)
        values = np.stack((values + left, values + right), axis=1).ravel()

    return values

def unrestricted_leaves(config: FragConfig, trial: int = 0) -> Iterator[np.ndarray]:
    """
    Generates the base-10 log-lengths of the 2^N leaves of one unrestricted tree, in left-to-right order.

    The tree is traversed depth first over subtrees: the top N - 18 levels are expanded first, then every subtree
    hanging below them is expanded level by level with vectorised operations and yielded as one block. A leaf's
    log-length is the sum of the logarithms of the proportions on its root path.

    Args:
        config: The run configuration.
        trial: The index of the trial, which selects the random stream.
    """

    rng = trial_generator(config.seed, trial)
    top = max(0, config.levels - fraglaw.defaults.SUBTREE_DEPTH)
    roots = _expand(np.zeros(1), 1, top, config, rng)

    for root in roots:
        yield _expand(np.array([root]), top + 1, config.levels - top, config, rng)

def threshold_grid(s: float) -> List[float]:
    """
    Returns the default P_N grid with the threshold `s` added.
    """

    return sorted(set(fraglaw.defaults.PN_GRID) | {float(s)})

class UnrestrictedRun:
    """
    The outcome of one unrestricted tree.
    """

    def __init__(self,
                 trial: int,
                 levels: int,
                 histogram: DigitHistogram,
                 min_log10: float,
                 max_log10: float,
                 linear_total: float) -> None:
        self._trial = trial
        self._levels = levels
        self._histogram = histogram
        self._min_log10 = min_log10
        self._max_log10 = max_log10
        self._linear_total = linear_total

    @property
    def trial(self) -> int:
        """
        The index of the trial.
        """

        return self._trial

    @property
    def levels(self) -> int:
        """
        The number of levels N.
        """

        return self._levels

    @property
    def histogram(self) -> DigitHistogram:
        """
        The first-digit histogram of the leaves.
        """

        return self._histogram

    @property
    def leaf_count(self) -> int:
        """
        The number of leaves, 2^N.
        """

        return int(round(self._histogram.total))

    @property
    def min_log10(self) -> float:
        """
        The base-10 log-length of the shortest leaf.
        """

        return self._min_log10

    @property
    def max_log10(self) -> float:
        """
        The base-10 log-length of the longest leaf.
        """

        return self._max_log10

    @property
    def linear_total(self) -> float:
        """
        The sum of the linear leaf lengths, 1 up to rounding.
        """

        return self._linear_total

    def ratio(self) -> float:
        """
        Returns the ratio of the longest to the shortest leaf.
        """

        return 10.0 ** (self._max_log10 - self._min_log10)

    def log_ratio(self) -> float:
        """
        Returns the natural logarithm of `ratio()`.
        """

        return (self._max_log10 - self._min_log10) * LN10

    def pn(self, s: float) -> float:
        """
        Returns P_N(s), the proportion of leaves whose significand is at most `s`, for a threshold of the grid.

        Raises:
            InvalidArgumentError: If `s` is not a point of the tabulated grid.
        """

        return self._histogram.pn(s)

def simulate_unrestricted(config: FragConfig,
                          trial: int = 0,
                          grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> UnrestrictedRun:
    """
    Runs one unrestricted tree and folds its leaves into a histogram without storing them.

    Args:
        config: The run configuration; its model must be "unrestricted".
        trial: The index of the trial.
        grid: The thresholds at which P_N(s) is tabulated.

    Returns:
        The histogram, the extreme leaves and the linear total of the tree.

    Raises:
        InvalidArgumentError: If the configuration is not for the unrestricted model.
        NumericFailure: If the leaves of a tree with N <= 20 do not add up to 1 within 1e-6.
    """

    if config.model != "unrestricted":
        raise InvalidArgumentError("simulate_unrestricted needs an unrestricted configuration.")

    histogram = DigitHistogram.empty(grid)
    lowest = math.inf
    highest = -math.inf
    partial_totals: List[float] = []

    for block in unrestricted_leaves(config, trial):
        histogram = histogram.merge(first_digit_histogram(block, grid=grid))
        lowest = min(lowest, float(block.min()))
        highest = max(highest, float(block.max()))
        partial_totals.append(float(np.sum(np.power(10.0, block))))

    linear_total = math.fsum(partial_totals)
    if config.levels <= 20 and abs(linear_total - 1.0) > 1e-6:
        msg = "The leaves of trial {} add up to {} instead of 1.".format(trial, linear_total)
        logging.error(msg)
        raise NumericFailure(msg)

    logging.debug("Unrestricted trial %s: %s leaves, log10 range [%s, %s].",
                  trial, histogram.total, lowest, highest)

    return UnrestrictedRun(trial, config.levels, histogram, lowest, highest, linear_total)

def simulate_unrestricted_trials(config: FragConfig,
                                 threads: Optional[int] = None,
                                 grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> List[UnrestrictedRun]:
    """
    Runs `config.trials` independent unrestricted trees.
    """

    return run_trials(lambda trial: simulate_unrestricted(config, trial, grid), config.trials, threads)

def pn_series(config: FragConfig,
              levels: Sequence[int],
              s: float,
              threads: Optional[int] = None) -> List[TrialSeries]:
    """
    Tracks P_N(s) across the trials of the unrestricted model for several numbers of levels.

    Returns:
        One `TrialSeries` per entry of `levels`.
    """

    grid = threshold_grid(s)
    result: List[TrialSeries] = []
    for level_count in levels:
        runs = simulate_unrestricted_trials(config.with_levels(level_count), threads, grid)
        result.append(TrialSeries(s, level_count, [run.pn(s) for run in runs]))
        logging.info("Tracked P_N(%s) over %s trials at N = %s.", s, len(runs), level_count)

    return result

class RestrictedRun:
    """
    The outcome of one restricted decomposition.
    """

    def __init__(self, trial: int, log10_pieces: np.ndarray, histogram: DigitHistogram, linear_total: float) -> None:
        self._trial = trial
        self._log10_pieces = log10_pieces
        self._histogram = histogram
        self._linear_total = linear_total

    @property
    def trial(self) -> int:
        """
        The index of the trial.
        """

        return self._trial

    @property
    def log10_pieces(self) -> np.ndarray:
        """
        The base-10 log-lengths of X_1, ..., X_N.
        """

        return self._log10_pieces

    @property
    def histogram(self) -> DigitHistogram:
        """
        The first-digit histogram of the pieces.
        """

        return self._histogram

    @property
    def linear_total(self) -> float:
        """
        The sum of the linear piece lengths.
        """

        return self._linear_total

    def pn(self, s: float) -> float:
        """
        Returns P_N(s) for a threshold of the tabulated grid.
        """

        return self._histogram.pn(s)

def _level_proportions(config: FragConfig,
                       rng: np.random.Generator,
                       count: int) -> Tuple[np.ndarray, np.ndarray]:
    explicit = min(len(config.densities) - 1, count)
    parts = [log10_proportions(config.density_for_level(level), rng, 1) for level in range(1, explicit + 1)]

    if count > explicit:
        parts.append(log10_proportions(config.densities[-1], rng, count - explicit))

    return (np.concatenate([part[0] for part in parts]), np.concatenate([part[1] for part in parts]))

def simulate_restricted(config: FragConfig,
                        trial: int = 0,
                        grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> RestrictedRun:
    """
    Runs one restricted decomposition: after cutting at p_1, ..., p_{N-1} the pieces are
    X_1 = 1 - p_1, X_k = p_1 ... p_{k-1} (1 - p_k) and X_N = p_1 ... p_{N-1}.

    Args:
        config: The run configuration; its model must be "restricted".
        trial: The index of the trial.
        grid: The thresholds at which P_N(s) is tabulated.

    Raises:
        InvalidArgumentError: If the configuration is not for the restricted model.
        NumericFailure: If the pieces do not add up to 1 within 1e-9.
    """

    if config.model != "restricted":
        raise InvalidArgumentError("simulate_restricted needs a restricted configuration.")

    rng = trial_generator(config.seed, trial)
    cuts = config.levels - 1

    (log_p, log_complement) = _level_proportions(config, rng, cuts)
    prefix = np.concatenate(([0.0], np.cumsum(log_p)))

    pieces = np.empty(config.levels, dtype=np.float64)
    pieces[:cuts] = prefix[:cuts] + log_complement
    pieces[cuts] = prefix[cuts]

    linear_total = float(np.sum(np.power(10.0, pieces)))
    if abs(linear_total - 1.0) > 1e-9:
        msg = "The restricted pieces of trial {} add up to {} instead of 1.".format(trial, linear_total)
        logging.error(msg)
        raise NumericFailure(msg)

    return RestrictedRun(trial, pieces, first_digit_histogram(pieces, grid=grid), linear_total)

def simulate_restricted_trials(config: FragConfig,
                               threads: Optional[int] = None,
                               grid: Optional[Sequence[float]] = fraglaw.defaults.PN_GRID) -> List[RestrictedRun]:
    """
    Runs `config.trials` independent restricted decompositions.
    """

    return run_trials(lambda trial: simulate_restricted(config, trial, grid), config.trials, threads)

class ProductExperiment(NamedTuple):
    """
    The comparison of products of independent uniforms with the quantified convergence bound.
    """

    levels: int
    samples: int
    s: float
    probability: float
    deviation: float
    bound: Optional[float]
    sigma: float

def uniform_product_experiment(levels: int,
                               samples: int,
                               seed: int = fraglaw.defaults.SEED,
                               s: float = 2.0,
                               trial: int = 0,
                               chunk: int = 10 ** 6) -> ProductExperiment:
    """
    Estimates Prob(significand of U_1 ... U_N <= s) for independent uniforms and compares it with log10(s).

    Args:
        levels: The number N of factors.
        samples: The number of products.
        seed: The run seed.
        s: The significand threshold.
        trial: The index of the trial.
        chunk: The number of products drawn at once.

    Returns:
        The estimate, its deviation from log10(s), the binomial standard deviation of the estimate and the
        theoretical bound (`None` for N < 4, where the bound does not hold).
    """

    if levels < 1 or samples < 1:
        raise InvalidArgumentError("Need at least one factor and one sample, got N = {} and {} samples."
                                   .format(levels, samples))

    rng = trial_generator(seed, trial)
    below = 0
    remaining = samples

    while remaining > 0:
        size = min(chunk, remaining)
        logs = np.zeros(size)
        for _ in range(levels):
            logs += np.log10(open_unit_uniform(rng, size))

        below += int(np.count_nonzero(significands(logs) <= s))
        remaining -= size

    probability = below / samples
    expected = math.log10(s)
    sigma = math.sqrt(expected * (1.0 - expected) / samples)
    bound = product_error_bound_uniform(levels, s) if levels >= 4 else None

    return ProductExperiment(levels, samples, s, probability, abs(probability - expected), bound, sigma)
