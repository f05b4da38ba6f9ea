#!/usr/bin/env python3

"""
This module contains the random stream contract shared by all simulators and the helper that runs independent
trials on a thread pool.

Every trial draws from its own `numpy.random.Philox` stream (a 64-bit counter-based generator). The stream of trial
`t` under seed `s` is keyed by `SeedSequence(s, spawn_key=(t,))`, so the numbers a trial sees depend only on `(s, t)`
and never on how many threads run the trials or in which order they finish.
"""

from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Callable, List, Optional, TypeVar

import numpy as np

import fraglaw.defaults
from fraglaw.errors import InvalidArgumentError

T = TypeVar("T")

MAX_SEED: int = 2 ** 64 - 1

def check_seed(seed: int) -> int:
    """
    Checks that `seed` is a 64-bit unsigned integer.

    Args:
        seed: The seed to check.

    Returns:
        The seed itself.

    Raises:
        InvalidArgumentError: If `seed` is negative or does not fit in 64 bits.
    """

    if not 0 <= seed <= MAX_SEED:
        raise InvalidArgumentError("The seed must be a 64-bit unsigned integer, got {}.".format(seed))

    return seed

def trial_generator(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """
    Returns the random generator of one trial.

    Args:
        seed: The run seed.
        trial: The index of the trial.
        stream: An optional second key for trials that need several independent streams.

    Returns:
        A generator backed by a Philox stream derived from `(seed, trial, stream)`.
    """

    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=(trial, stream))
    return np.random.Generator(np.random.Philox(sequence))

def run_trials(trial_function: Callable[[int], T],
               trials: int,
               threads: Optional[int] = None) -> List[T]:
    """
    Runs `trial_function(0), ..., trial_function(trials - 1)` and returns the results in trial order.

    Args:
        trial_function: The function executing one trial given its index. It must derive its randomness from
            `trial_generator` so that the results do not depend on the scheduling.
        trials: The number of trials.
        threads: The number of worker threads; defaults to `fraglaw.defaults.thread_count()`.

    Returns:
        The list of trial results, ordered by trial index.
    """

    if trials < 1:
        raise InvalidArgumentError("At least one trial is needed, got {}.".format(trials))

    workers = threads if threads is not None else fraglaw.defaults.thread_count()
    workers = max(1, min(workers, trials))

    logging.debug("Running %s trials on %s threads.", trials, workers)

    if workers == 1:
        return [trial_function(trial) for trial in range(trials)]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(trial_function, range(trials)))
