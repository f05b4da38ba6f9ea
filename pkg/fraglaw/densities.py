#!/usr/bin/env python3

"""
This module contains the probability densities on (0, 1) from which cut proportions are drawn.

Every density can evaluate itself, draw samples from a `numpy.random.Generator` and describe its support. Densities
with a closed-form Mellin transform on the line Re(s) = 1 expose it through `mellin_closed_form`; the others are
integrated numerically by `fraglaw.mellin`.
"""

from abc import ABCMeta, abstractmethod
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fraglaw.errors import InvalidArgumentError

LN10: float = math.log(10.0)
LOG10_HALF: float = math.log10(0.5)

def open_unit_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Draws `size` uniform numbers from the open interval (0, 1).

    The numbers are (k + 1/2) / 2^53 for a uniform integer k, so neither 0 nor 1 can occur and the logarithms of both
    the number and its complement are always finite.
    """

    return (rng.integers(0, 2 ** 53, size=size, dtype=np.int64) + 0.5) / float(2 ** 53)

class CutDensity(metaclass=ABCMeta):
    """
    An interface for probability densities supported in (0, 1).
    """

    @abstractmethod
    def kind(self) -> str:
        """
        Returns the name of the density family, as used in configuration files.
        """
        pass

    @abstractmethod
    def pdf(self, x: np.ndarray) -> np.ndarray:
        """
        Evaluates the density at the points `x`.
        """
        pass

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draws `size` independent proportions, all strictly inside (0, 1).
        """
        pass

    @abstractmethod
    def breakpoints(self) -> List[float]:
        """
        Returns the ends of the support and the points where the density is discontinuous, in increasing order.
        """
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the configuration dictionary describing the density.
        """
        pass

    def mellin_closed_form(self, t: float) -> Optional[complex]:
        """
        Returns E[x^(-it)] in closed form, or `None` if the density has none.
        """

        return None

    def reflected(self) -> "CutDensity":
        """
        Returns the density of 1 - x.
        """

        return ReflectedDensity(self)

    def max_height(self) -> float:
        """
        Returns an upper bound of the density, used to bound truncated integration tails.
        """

        points = np.linspace(0.0, 1.0, 4097)[1:-1]
        return float(np.max(self.pdf(points)))

class UniformDensity(CutDensity):
    """
    The uniform density on (0, 1).
    """

    def kind(self) -> str:
        return "uniform"

    def pdf(self, x: np.ndarray) -> np.ndarray:
        points = np.asarray(x, dtype=np.float64)
        return np.where((points > 0.0) & (points < 1.0), 1.0, 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return open_unit_uniform(rng, size)

    def breakpoints(self) -> List[float]:
        return [0.0, 1.0]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "uniform"}

    def mellin_closed_form(self, t: float) -> Optional[complex]:
        return 1.0 / complex(1.0, -t)

    def reflected(self) -> "CutDensity":
        return self

    def max_height(self) -> float:
        return 1.0

    def __repr__(self) -> str:
        return "UniformDensity()"

class PiecewiseConstantDensity(CutDensity):
    """
    A step density: `heights[j]` on the interval (`breakpoints[j]`, `breakpoints[j + 1]`).
    """

    def __init__(self, breakpoints: Sequence[float], heights: Sequence[float]) -> None:
        """
        Creates a new `PiecewiseConstantDensity` object.

        Args:
            breakpoints: Increasing points in [0, 1]; there is one more breakpoint than there are heights.
            heights: The nonnegative values of the density on the intervals between the breakpoints.

        Raises:
            InvalidArgumentError: If the breakpoints are not increasing points of [0, 1], if a height is negative or
                if the density does not integrate to 1 within 1e-9.
        """

        points = np.asarray(breakpoints, dtype=np.float64)
        values = np.asarray(heights, dtype=np.float64)

        if points.ndim != 1 or values.ndim != 1 or points.size != values.size + 1 or values.size == 0:
            raise InvalidArgumentError("A piecewise density needs k + 1 breakpoints for k heights.")

        if points[0] < 0.0 or points[-1] > 1.0 or np.any(np.diff(points) <= 0.0):
            raise InvalidArgumentError("The breakpoints must be increasing points of [0, 1].")

        if np.any(values < 0.0) or not np.all(np.isfinite(values)):
            raise InvalidArgumentError("The heights of a density must be finite and nonnegative.")

        masses = values * np.diff(points)
        total = float(masses.sum())
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError("The density integrates to {} instead of 1.".format(total))

        self._points = points
        self._heights = values
        self._masses = masses / total

    @property
    def heights(self) -> List[float]:
        """
        The values of the density on the intervals.
        """

        return self._heights.tolist()

    def kind(self) -> str:
        return "piecewise"

    def pdf(self, x: np.ndarray) -> np.ndarray:
        points = np.asarray(x, dtype=np.float64)
        index = np.searchsorted(self._points, points, side="right") - 1
        inside = (index >= 0) & (index < self._heights.size) & (points > 0.0) & (points < 1.0)

        return np.where(inside, self._heights[np.clip(index, 0, self._heights.size - 1)], 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        segments = rng.choice(self._heights.size, size=size, p=self._masses)
        lows = self._points[segments]
        widths = self._points[segments + 1] - lows
        values = lows + widths * open_unit_uniform(rng, size)

        return np.clip(values, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))

    def breakpoints(self) -> List[float]:
        return self._points.tolist()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "piecewise", "breakpoints": self._points.tolist(), "heights": self._heights.tolist()}

    def mellin_closed_form(self, t: float) -> Optional[complex]:
        exponent = complex(1.0, -t)
        total = 0j
        for (low, high, height) in zip(self._points[:-1], self._points[1:], self._heights):
            upper = complex(high) ** exponent
            lower = complex(low) ** exponent if low > 0.0 else 0j
            total += height * (upper - lower)

        return total / exponent

    def reflected(self) -> "CutDensity":
        return PiecewiseConstantDensity((1.0 - self._points)[::-1], self._heights[::-1])

    def max_height(self) -> float:
        return float(self._heights.max())

    def __repr__(self) -> str:
        return "PiecewiseConstantDensity({}, {})".format(self._points.tolist(), self._heights.tolist())

def log_box_coefficient(epsilon: float, center: float, frequency: float) -> complex:
    """
    Returns E[exp(-2 pi i frequency X)] for X uniform on [center - epsilon, center + epsilon]:
    exp(-2 pi i frequency center) * sin(2 pi frequency epsilon) / (2 pi frequency epsilon).
    """

    argument = 2.0 * math.pi * frequency * epsilon
    sinc = math.sin(argument) / argument if argument != 0.0 else 1.0
    phase = -2.0 * math.pi * frequency * center

    return complex(math.cos(phase), math.sin(phase)) * sinc

class LogBoxDensity(CutDensity):
    """
    The density of a proportion p whose base-10 logarithm is uniform on [center_log - epsilon, center_log + epsilon].

    As epsilon shrinks the proportion concentrates at 10^center_log; with the default center every cut is then
    close to one half. The ell-th Fourier coefficient of log10 p and the Mellin transform of p at
    1 - 2 pi i ell / log(10) are the same number, `log_box_coefficient(epsilon, center_log, ell)`.
    """

    def __init__(self, epsilon: float, center_log: float = LOG10_HALF) -> None:
        """
        Creates a new `LogBoxDensity` object.

        Args:
            epsilon: The half-width of the box in log10 p.
            center_log: The center of the box in log10 p; the box must lie in (-inf, 0).

        Raises:
            InvalidArgumentError: If `epsilon` is not positive or the box reaches 0.
        """

        if not epsilon > 0.0:
            raise InvalidArgumentError("The log-box half-width must be positive, got {}.".format(epsilon))

        if not center_log + epsilon < 0.0:
            raise InvalidArgumentError("The log-box [{} - {}, {} + {}] must lie below 0."
                                       .format(center_log, epsilon, center_log, epsilon))

        self._epsilon = float(epsilon)
        self._center_log = float(center_log)

    @property
    def epsilon(self) -> float:
        """
        The half-width of the box.
        """

        return self._epsilon

    @property
    def center_log(self) -> float:
        """
        The center of the box in log10 p.
        """

        return self._center_log

    def kind(self) -> str:
        return "logbox"

    def log_bounds(self) -> Tuple[float, float]:
        """
        Returns the interval on which log10 p is uniform.
        """

        return (self._center_log - self._epsilon, self._center_log + self._epsilon)

    def pdf(self, x: np.ndarray) -> np.ndarray:
        points = np.asarray(x, dtype=np.float64)
        (low, high) = self.breakpoints()
        inside = (points > low) & (points < high)
        safe = np.where(inside, points, 1.0)

        return np.where(inside, 1.0 / (2.0 * self._epsilon * LN10 * safe), 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return 10.0 ** self.sample_log10(rng, size)

    def sample_log10(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draws the base-10 logarithms of `size` proportions.
        """

        return self._center_log + self._epsilon * (2.0 * open_unit_uniform(rng, size) - 1.0)

    def breakpoints(self) -> List[float]:
        (low, high) = self.log_bounds()
        return [10.0 ** low, 10.0 ** high]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "logbox", "epsilon": self._epsilon, "center_log": self._center_log}

    def mellin_closed_form(self, t: float) -> Optional[complex]:
        # p^(-it) = exp(-2 pi i (t log(10) / 2 pi) log10 p)
        return log_box_coefficient(self._epsilon, self._center_log, t * LN10 / (2.0 * math.pi))

    def max_height(self) -> float:
        return 1.0 / (2.0 * self._epsilon * LN10 * self.breakpoints()[0])

    def __repr__(self) -> str:
        return "LogBoxDensity(epsilon={!r}, center_log={!r})".format(self._epsilon, self._center_log)

class ReflectedDensity(CutDensity):
    """
    The density of 1 - x when x has the wrapped density.
    """

    def __init__(self, original: CutDensity) -> None:
        self._original = original

    def kind(self) -> str:
        return "reflected"

    def pdf(self, x: np.ndarray) -> np.ndarray:
        return self._original.pdf(1.0 - np.asarray(x, dtype=np.float64))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        values = 1.0 - self._original.sample(rng, size)
        return np.clip(values, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))

    def breakpoints(self) -> List[float]:
        return sorted(1.0 - point for point in self._original.breakpoints())

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "reflected", "of": self._original.to_dict()}

    def reflected(self) -> "CutDensity":
        return self._original

    def max_height(self) -> float:
        return self._original.max_height()

    def __repr__(self) -> str:
        return "ReflectedDensity({!r})".format(self._original)
