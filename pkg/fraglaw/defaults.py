#!/usr/bin/env python3

"""
This module contains default configuration values.
"""

import os

from typing import Tuple

from fraglaw.errors import ConfigurationError

VERSION: str = "0.1"

BASE: int = 10

SEED: int = 20131

TRIALS: int = 1

# Grid on which P_N(s) is tabulated: s = 1.0, 1.1, ..., 10.0.
PN_GRID: Tuple[float, ...] = tuple(round(1.0 + 0.1 * i, 1) for i in range(91))

# Grid resolution used for the sup-norm distances of weighted data.
SUP_GRID_POINTS: int = 101

ELL_MAX: int = 100

QUADRATURE_TOLERANCE: float = 1e-10

MAX_UNRESTRICTED_LEVELS: int = 30

MAX_RESTRICTED_LEVELS: int = 10 ** 7

MAX_FIXED_LEVELS: int = 10 ** 6

# Depth of the subtrees that the unrestricted simulator expands with vectorised numpy operations.
SUBTREE_DEPTH: int = 18

RATIONAL_Q_MAX: int = 1000

RATIONAL_TOLERANCE: float = 1e-12

MAX_CONVERGENT_DEPTH: int = 50

DISCRETE_LENGTH: int = 10 ** 6 + 1

# Discrete pieces below this length are processed in numpy arrays instead of as Python integers.
MATERIALIZATION_THRESHOLD: int = 2 ** 52

MAX_DISCRETE_PIECES: int = 10 ** 7

CHI_SQUARE_DOF: int = 8

# Level of the chi-square critical value that a run is compared with.
CHI_SQUARE_LEVEL: float = 0.95

MAX_EXHAUSTIVE_MATRIX_SIZE: int = 10

MAX_SAMPLED_PERMUTATIONS: int = 10 ** 8

PERMUTATION_BLOCK: int = 100000

MAX_RENCONTRES_SIZE: int = 20

MAX_COUNTEREXAMPLE_LEVELS: int = 25

OUTPUT_DIR: str = "fraglaw_output"

# Default significand threshold s of P_N(s).
THRESHOLD: float = 2.0

THREADS_ENV_VAR: str = "FRAGLAW_THREADS"

def thread_count() -> int:
    """
    Returns the number of worker threads, honouring the `FRAGLAW_THREADS` environment variable.
    """

    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1

    try:
        return max(1, int(value))
    except ValueError:
        raise ConfigurationError(THREADS_ENV_VAR, "expected a positive integer, got {!r}.".format(value))
