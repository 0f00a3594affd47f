"""Coordinatewise estimators: the empirical distribution and hard thresholding.

Both rules act on each symbol's count independently, which is what lets the
exact-risk machinery decompose the l1 risk into per-coordinate sums.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import CountHistogram, EstimateVector

__all__ = [
    "ThresholdConfig",
    "CoordinatewiseEstimator",
    "empirical_estimator",
    "threshold_estimator",
    "empirical",
    "threshold_level",
    "hard_threshold",
    "DEFAULT_ETA",
]

logger = logging.getLogger(__name__)

# The theory requires eta > 1 and leaves the choice open; mid-range avoids
# both failure modes of the keep/drop trade-off.
DEFAULT_ETA = 1.5


@dataclass(frozen=True)
class ThresholdConfig:
    """Cutoff parameters for the hard-thresholding rule."""

    n: int
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not self.eta > 1.0:
            raise ValueError("eta must be strictly greater than 1")

    @property
    def delta_n(self) -> float:
        """(ln n)^(2 eta) / n; requires n >= 2 so the log is positive."""
        if self.n < 2:
            raise ValueError("delta_n requires n >= 2 (ln n must be positive)")
        return math.log(self.n) ** (2.0 * self.eta) / self.n


@dataclass(frozen=True)
class CoordinatewiseEstimator:
    """A per-symbol rule k -> estimate, vectorized over count arrays.

    `fn(counts, n)` must be elementwise (shape preserving) and map into
    [0, 1]; that range is what certifies truncation in exact risk sums.
    """

    name: str
    fn: Callable[[np.ndarray, int], np.ndarray] = field(repr=False)

    def __call__(self, counts, n: int) -> np.ndarray:
        return self.fn(np.asarray(counts), n)


def empirical_estimator() -> CoordinatewiseEstimator:
    """Rule k -> k / n: the empirical distribution (MLE)."""
    return CoordinatewiseEstimator("empirical", lambda counts, n: counts / n)


def threshold_level(cfg: ThresholdConfig) -> float:
    """The keep/drop cutoff e^2 (ln n)^(2 eta) / n on estimated frequencies."""
    return math.exp(2.0) * cfg.delta_n


def threshold_estimator(cfg: ThresholdConfig) -> CoordinatewiseEstimator:
    """Rule k -> (k/n) if k/n strictly exceeds the cutoff, else 0."""
    cut = threshold_level(cfg)
    if cut >= 1.0:
        # Degenerate small-n regime: every frequency is zeroed.  Permitted
        # on purpose; the caller should see what finite n actually does.
        logger.warning(
            "threshold level %.6g >= 1 at n=%d, eta=%g: estimator returns 0 everywhere",
            cut, cfg.n, cfg.eta,
        )

    def fn(counts: np.ndarray, n: int) -> np.ndarray:
        freq = counts / n
        return np.where(freq > cut, freq, 0.0)

    return CoordinatewiseEstimator(f"threshold(eta={cfg.eta:g})", fn)


def empirical(h: CountHistogram) -> EstimateVector:
    """Empirical distribution of a histogram; always lies on the simplex."""
    return EstimateVector(h.counts / h.n)


def hard_threshold(h: CountHistogram, cfg: ThresholdConfig) -> EstimateVector:
    """Thresholded empirical distribution; may sum to less than 1."""
    if cfg.n != h.n:
        raise ValueError(f"config n={cfg.n} does not match histogram n={h.n}")
    return EstimateVector(threshold_estimator(cfg)(h.counts, h.n))
