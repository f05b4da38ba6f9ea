#!/usr/bin/env python3

"""
This module contains the Mellin transforms of cut densities on the line Re(s) = 1 and the quantities built from them:
the condition sum that decides whether products of proportions become Benford, the error bounds for products of
independent proportions, and the schedule of shrinking log-box densities whose products stay away from Benford.

All transforms are evaluated at s = 1 - 2*pi*i*ell/log(B), where they equal E[x^(-it)] with t = 2*pi*ell/log(B).
Since the densities are real, the transform at -ell is the conjugate of the one at ell, so sums over 0 < |ell| <= L
are computed as twice the sums over 1 <= ell <= L.
"""

import logging
import math
from typing import Dict, List, NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

import fraglaw.defaults
from fraglaw.densities import CutDensity, LN10, log_box_coefficient, LogBoxDensity, LOG10_HALF
from fraglaw.errors import InvalidArgumentError, NumericFailure

class MellinValue(NamedTuple):
    """
    The Mellin transform of a density at the frequency `ell`.
    """

    ell: int
    value: complex

    @property
    def modulus(self) -> float:
        """
        The absolute value of the transform; at most 1 for a probability density.
        """

        return abs(self.value)

def mellin_frequency(ell: int, base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns t = 2*pi*ell/log(base), the imaginary part of 1 - s at which the transform is evaluated.
    """

    if base < 2:
        raise InvalidArgumentError("The base must be at least 2, got {}.".format(base))

    return 2.0 * math.pi * ell / math.log(base)

def _check_ell(ell: int) -> None:
    if ell == 0:
        raise InvalidArgumentError("The Mellin frequency ell must be nonzero; the transform at ell = 0 is 1.")

def _checked(ell: int, value: complex) -> MellinValue:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericFailure("The Mellin transform at ell = {} is not finite.".format(ell))

    if abs(value) > 1.0 + 1e-9:
        raise NumericFailure("The Mellin transform at ell = {} has modulus {} > 1.".format(ell, abs(value)))

    return MellinValue(ell, value)

def mellin_transform_quadrature(density: CutDensity,
                                ell: int,
                                base: int = fraglaw.defaults.BASE,
                                tolerance: float = fraglaw.defaults.QUADRATURE_TOLERANCE) -> MellinValue:
    """
    Evaluates E[x^(-it)] by adaptive quadrature.

    The integral is taken in the variable u = log x, where it becomes the Fourier integral of
    g(u) = f(e^u) e^u. The range is split at the discontinuities of the density and each piece is integrated with
    QUADPACK's oscillatory (cos/sin weighted) rule. A support reaching 0 is truncated where the remaining mass is
    below a hundredth of the tolerance.

    Args:
        density: The density.
        ell: The nonzero frequency.
        base: The base B.
        tolerance: The absolute error target.

    Returns:
        The transform value.

    Raises:
        InvalidArgumentError: If `ell` is 0.
        NumericFailure: If the quadrature error estimate exceeds the tolerance by more than a factor of 100.
    """

    _check_ell(ell)
    t = mellin_frequency(ell, base)

    points = density.breakpoints()
    lower_log = math.log(tolerance * 1e-2 / max(density.max_height(), 1e-300))
    log_points = sorted({math.log(point) if point > 0.0 else lower_log for point in points})
    log_points = [point for point in log_points if point >= lower_log]

    segments = list(zip(log_points[:-1], log_points[1:]))
    segment_tolerance = tolerance / (4.0 * max(len(segments), 1))

    real_part = 0.0
    imaginary_part = 0.0
    error = 0.0

    for (low, high) in segments:
        margin = 1e-13 * max(1.0, abs(low), abs(high))

        def log_integrand(u: float, low: float = low, high: float = high, margin: float = margin) -> float:
            inner = min(max(u, low + margin), high - margin)
            return float(density.pdf(np.array([math.exp(inner)]))[0]) * math.exp(u)

        (cosine, cosine_error) = integrate.quad(log_integrand, low, high, weight="cos", wvar=t,
                                                epsabs=segment_tolerance, epsrel=0.0, limit=400)
        (sine, sine_error) = integrate.quad(log_integrand, low, high, weight="sin", wvar=t,
                                            epsabs=segment_tolerance, epsrel=0.0, limit=400)

        real_part += cosine
        imaginary_part -= sine
        error += cosine_error + sine_error

    if error > 100.0 * tolerance:
        msg = "Mellin quadrature at ell = {} only reached an error estimate of {}.".format(ell, error)
        logging.error(msg)
        raise NumericFailure(msg)

    if error > tolerance:
        logging.warning("Mellin quadrature at ell = %s has error estimate %s above the tolerance %s.",
                        ell, error, tolerance)

    return _checked(ell, complex(real_part, imaginary_part))

def mellin_transform(density: CutDensity,
                     ell: int,
                     base: int = fraglaw.defaults.BASE,
                     method: str = "auto") -> MellinValue:
    """
    Returns the Mellin transform M_f(1 - 2*pi*i*ell/log(base)) = E[x^(-2*pi*i*ell/log(base))].

    Args:
        density: The density f.
        ell: The nonzero frequency.
        base: The base B.
        method: "auto" uses the closed form when the density has one and quadrature otherwise; "quadrature" always
            integrates numerically; "closed" requires a closed form.

    Raises:
        InvalidArgumentError: If `ell` is 0, `method` is unknown or a closed form is requested but unavailable.
    """

    _check_ell(ell)

    if method == "quadrature":
        return mellin_transform_quadrature(density, ell, base)

    if method not in ("auto", "closed"):
        raise InvalidArgumentError("Unknown Mellin evaluation method: {}.".format(method))

    closed_form = density.mellin_closed_form(mellin_frequency(ell, base))
    if closed_form is not None:
        return _checked(ell, closed_form)

    if method == "closed":
        raise InvalidArgumentError("The {} density has no closed-form Mellin transform.".format(density.kind()))

    return mellin_transform_quadrature(density, ell, base)

def modulus_table(densities: Sequence[CutDensity],
                  ell_max: int,
                  base: int = fraglaw.defaults.BASE) -> np.ndarray:
    """
    Returns the array `table[m, ell - 1] = |M_{f_m}(ell)|` for ell = 1, ..., ell_max.

    Transforms of a density object appearing several times in `densities` are computed once.
    """

    if ell_max < 1:
        raise InvalidArgumentError("ell_max must be at least 1, got {}.".format(ell_max))

    cache: Dict[int, np.ndarray] = {}
    rows: List[np.ndarray] = []

    for density in densities:
        key = id(density)
        if key not in cache:
            cache[key] = np.array([mellin_transform(density, ell, base).modulus for ell in range(1, ell_max + 1)])

        rows.append(cache[key])

    return np.array(rows)

def mellin_condition_sum(f: CutDensity,
                         g: CutDensity,
                         levels: int,
                         ell_max: int = fraglaw.defaults.ELL_MAX,
                         base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns the sum over 0 < |ell| <= ell_max of max(|M_f(ell)|, |M_g(ell)|)^levels.

    This bounds the modulus of the condition sum for any product of `levels` factors each drawn from either f or
    g, typically a density and its reflection x -> 1 - x. The caller checks that it decays in `levels`.

    Raises:
        InvalidArgumentError: If `levels` or `ell_max` is smaller than 1.
    """

    if levels < 1:
        raise InvalidArgumentError("The number of levels must be at least 1, got {}.".format(levels))

    table = modulus_table([f, g], ell_max, base)
    dominant = np.maximum(table[0], table[1])

    return 2.0 * float(np.sum(dominant ** levels))

def mellin_condition_sum_varying(densities: Sequence[CutDensity],
                                 ell_max: int = fraglaw.defaults.ELL_MAX,
                                 base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns the sum over 0 < |ell| <= ell_max of the product over m of |M_{f_m}(ell)|, where the m-th factor of
    the product is drawn from the m-th density.

    Raises:
        InvalidArgumentError: If `densities` is empty.
    """

    if len(densities) == 0:
        raise InvalidArgumentError("At least one density is needed.")

    table = modulus_table(densities, ell_max, base)

    return 2.0 * float(np.sum(np.prod(table, axis=0)))

def product_error_bound_general(densities: Sequence[CutDensity],
                                ell_max: int = fraglaw.defaults.ELL_MAX,
                                base: int = fraglaw.defaults.BASE) -> float:
    """
    Returns the truncated factor of the general product bound: for the product X of independent factors with the
    given densities and any (a, b) in (0, 1),
    |Prob(log_B X mod 1 in (a, b)) - (b - a)| <= (b - a) * (returned value + neglected tail).

    The neglected part |ell| > ell_max is estimated by `condition_sum_tail` and must be reported alongside.
    """

    return mellin_condition_sum_varying(densities, ell_max, base)

def condition_sum_tail(densities: Sequence[CutDensity],
                       ell_max: int = fraglaw.defaults.ELL_MAX,
                       base: int = fraglaw.defaults.BASE) -> float:
    """
    Estimates the part of the condition sum with |ell| > ell_max that the truncated sums leave out.

    Each transform is assumed to decay like C_m / ell (integration by parts for densities with jumps), with C_m
    fitted at ell_max. The tail is then 2 * prod(C_m) * zeta(N, ell_max + 1), which is infinite for a single factor.
    """

    if len(densities) == 0:
        raise InvalidArgumentError("At least one density is needed.")

    last_moduli = np.array([mellin_transform(density, ell_max, base).modulus for density in densities])
    constants = last_moduli * ell_max

    if len(densities) == 1:
        return math.inf

    hurwitz = float(special.zeta(len(densities), ell_max + 1))
    log_tail = float(np.sum(np.log(np.maximum(constants, 1e-300)))) + math.log(hurwitz)

    return 2.0 * math.exp(min(log_tail, 700.0))

def zeta(n: int) -> float:
    """
    Returns the Riemann zeta function at an integer n >= 2.
    """

    return 1.0 + zeta_minus_one(n)

def zeta_minus_one(n: int) -> float:
    """
    Returns zeta(n) - 1 for an integer n >= 2, by direct summation of 2^-n, ..., 999^-n and an Euler-Maclaurin tail.
    The neglected remainder is far below 1e-15 for every n >= 2.
    """

    if n < 2:
        raise InvalidArgumentError("zeta(n) is only evaluated at integers n >= 2, got {}.".format(n))

    cutoff = 1000
    head = math.fsum(k ** -float(n) for k in range(2, cutoff))

    m = float(cutoff)
    tail = (m ** (1 - n) / (n - 1)
            + m ** -n / 2.0
            + n * m ** (-n - 1) / 12.0
            - n * (n + 1) * (n + 2) * m ** (-n - 3) / 720.0)

    return head + tail

def product_error_bound_uniform(levels: int, s: float) -> float:
    """
    Returns the bound on |Prob(significand of a product of N uniforms <= s) - log10(s)|:
    (1/2.9^N + (zeta(N) - 1)/2.7^N) * 2 * log10(s).

    Args:
        levels: The number N of uniform factors; the bound holds for N >= 4.
        s: The significand threshold in [1, 10).

    Raises:
        InvalidArgumentError: If N < 4 or s is outside of [1, 10).
    """

    if levels < 4:
        raise InvalidArgumentError("The uniform product bound is only valid for N >= 4, got N = {}.".format(levels))

    if not 1.0 <= s < 10.0:
        raise InvalidArgumentError("The significand threshold s must lie in [1, 10), got {}.".format(s))

    return (2.9 ** -levels + zeta_minus_one(levels) / 2.7 ** levels) * 2.0 * math.log10(s)

def fourier_coefficient_logbox(epsilon: float, ell: int, center: float = LOG10_HALF) -> complex:
    """
    Returns the ell-th Fourier coefficient of the box density of width 2*epsilon centered at log10(1/2):
    (1/(2 epsilon)) * integral of exp(-2 pi i ell x) over |x - log10(1/2)| < epsilon,
    which is exp(-2 pi i ell log10(1/2)) * sin(2 pi ell epsilon)/(2 pi ell epsilon).

    This is the Mellin transform at ell of `LogBoxDensity(epsilon, center)`.

    Raises:
        InvalidArgumentError: If epsilon is not in (0, -center) or ell is 0.
    """

    if not 0.0 < epsilon < -center:
        raise InvalidArgumentError("epsilon must lie in (0, {}), got {}.".format(-center, epsilon))

    _check_ell(ell)

    return log_box_coefficient(epsilon, center, float(ell))

class EpsilonSchedule:
    """
    The half-widths epsilon_1 > epsilon_2 > ... of the log-box densities whose level-by-level products do not
    become Benford:

        epsilon_n = 0.99 * min(sqrt(3/(20 pi^2 (n+1)^2)), delta/(log(10) 2^(n+1)), |log10(1/2)|/2).

    The half-widths are measured in log10 p. The first term keeps |phi_n(1)| >= n(n+2)/(n+1)^2, the second keeps the
    sum of all 2*epsilon_n below delta / log(10), so that the natural logarithm of the ratio of any two pieces stays
    below delta, and the third keeps every box inside (-inf, 0).
    """

    SAFETY: float = 0.99

    def __init__(self, delta: float, n_max: int) -> None:
        """
        Creates a new `EpsilonSchedule` object.

        Args:
            delta: The bound on the natural logarithm of the ratio of any two final pieces, in (0, 1).
            n_max: The number of tabulated levels.

        Raises:
            InvalidArgumentError: If `delta` is outside of (0, 1) or `n_max` is smaller than 1.
        """

        if not 0.0 < delta < 1.0:
            raise InvalidArgumentError("delta must lie in (0, 1), got {}.".format(delta))

        if n_max < 1:
            raise InvalidArgumentError("The schedule needs at least one level, got {}.".format(n_max))

        self._delta = float(delta)
        self._n_max = n_max
        self._epsilons = tuple(self.epsilon(n) for n in range(1, n_max + 1))

    @property
    def delta(self) -> float:
        """
        The log-ratio bound.
        """

        return self._delta

    @property
    def n_max(self) -> int:
        """
        The number of tabulated levels.
        """

        return self._n_max

    @property
    def epsilons(self) -> List[float]:
        """
        epsilon_1, ..., epsilon_{n_max}.
        """

        return list(self._epsilons)

    def epsilon(self, n: int) -> float:
        """
        Returns epsilon_n for any level n >= 1.
        """

        if n < 1:
            raise InvalidArgumentError("Levels are numbered from 1, got {}.".format(n))

        return EpsilonSchedule.SAFETY * min(math.sqrt(3.0 / (20.0 * math.pi ** 2 * (n + 1) ** 2)),
                                            self._delta / (LN10 * 2.0 ** (n + 1)),
                                            abs(LOG10_HALF) / 2.0)

    def densities(self, levels: int) -> List[LogBoxDensity]:
        """
        Returns the log-box densities of the levels 1, ..., `levels`.
        """

        return [LogBoxDensity(self.epsilon(n)) for n in range(1, levels + 1)]

    def fourier_partial_products(self, levels: int, ell: int = 1) -> np.ndarray:
        """
        Returns the partial products prod_{n <= N} |phi_n(ell)| for N = 1, ..., `levels`.
        """

        moduli = [abs(fourier_coefficient_logbox(self.epsilon(n), ell)) for n in range(1, levels + 1)]
        return np.cumprod(moduli)

def counterexample_schedule(delta: float, n_max: int) -> EpsilonSchedule:
    """
    Returns the epsilon schedule of the non-Benford log-box construction for the log-ratio bound `delta`.
    """

    schedule = EpsilonSchedule(delta, n_max)
    logging.debug("Counterexample schedule: delta = %s, epsilon_1 = %s, epsilon_%s = %s.",
                  delta, schedule.epsilon(1), n_max, schedule.epsilon(n_max))

    return schedule

def telescoping_lower_bound(levels: int) -> float:
    """
    Returns (N + 2)/(2 (N + 1)), the value of prod_{n=1}^{N} n(n+2)/(n+1)^2.
    """

    return (levels + 2) / (2.0 * (levels + 1))
