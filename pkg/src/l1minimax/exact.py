"""Exact enumeration-based risk computation.

Binomial mean absolute deviation, exact l1 risk of any coordinatewise
estimator under the Multinomial model (marginals are Binomial, so the risk
decomposes into per-coordinate expectations), and exact Poisson total
variation distance.

All probability mass is evaluated in log space; expectation sums run over
a window around the Binomial mode and are only accepted once a geometric
tail bound certifies that the truncated contribution is below 1e-14, so
truncation is certified rather than heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .core import CompressedFamily, Distribution, ProbabilityVector
from .estimators import CoordinatewiseEstimator

__all__ = [
    "BinomialSpec",
    "PoissonPair",
    "binomial_pmf",
    "binomial_mad_exact",
    "binomial_expectation",
    "estimator_risk_exact",
    "poisson_pmf",
    "poisson_tv_exact",
]

# Certified absolute truncation budget for expectation sums.
TAIL_TOL = 1e-14
# Combined Poisson tail mass allowed outside the summation window.
POISSON_TAIL_TOL = 1e-15
# exp() underflows near -745; anchors beyond this use the log-gamma form.
_LOG_TINY = -700.0


@dataclass(frozen=True)
class BinomialSpec:
    """Parameters (n, p) of a Binomial count."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 1 or self.n != int(self.n):
            raise ValueError("n must be a positive integer")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class PoissonPair:
    """An ordered pair of Poisson rates for total-variation computation."""

    lambda_lo: float
    lambda_hi: float

    def __post_init__(self):
        if not (0.0 <= self.lambda_lo <= self.lambda_hi):
            raise ValueError("rates must satisfy 0 <= lambda_lo <= lambda_hi")
        if not math.isfinite(self.lambda_hi):
            raise ValueError("rates must be finite")


def binomial_pmf(spec: BinomialSpec, k: int) -> float:
    """P(X = k) for X ~ Binomial(n, p), via log space.

    The log binomial coefficient comes from log-gamma except on thin wings
    (min(k, n-k) <= 64), where the exact integer coefficient avoids the
    cancellation of two large log-gamma values.
    """
    n, p = spec.n, spec.p
    if not (0 <= k <= n):
        raise ValueError(f"k={k} outside 0..{n}")
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    if min(k, n - k) <= 64:
        log_coef = math.log(math.comb(n, k))
    else:
        log_coef = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    return math.exp(log_coef + k * math.log(p) + (n - k) * math.log1p(-p))


def _window_pmf(n: int, p: float, lo: int, hi: int, anchor: int) -> np.ndarray:
    """Binomial pmf on lo..hi from a log-space anchor and the exact
    multiplicative recurrence, vectorized with cumulative products.

    The anchor must lie inside [lo, hi].  When it sits at 0 or n its log
    mass is a single log1p/log product, which keeps small-np windows at
    machine precision; elsewhere it falls back to the log-gamma form.
    """
    if anchor == 0:
        log_a = n * math.log1p(-p)
    elif anchor == n:
        log_a = n * math.log(p)
    else:
        log_a = (gammaln(n + 1.0) - gammaln(anchor + 1.0) - gammaln(n - anchor + 1.0)
                 + anchor * math.log(p) + (n - anchor) * math.log1p(-p))
    out = np.empty(hi - lo + 1)
    out[anchor - lo] = 1.0
    odds = p / (1.0 - p)
    if anchor < hi:
        ks = np.arange(anchor, hi, dtype=float)
        out[anchor - lo + 1:] = np.cumprod((n - ks) / (ks + 1.0) * odds)
    if anchor > lo:
        ks = np.arange(anchor, lo, -1, dtype=float)
        out[anchor - lo - 1::-1] = np.cumprod(ks / ((n - ks + 1.0) * odds))
    out *= math.exp(log_a)
    return out


def binomial_expectation(
    n: int,
    p: float,
    term: Callable[[np.ndarray], np.ndarray],
    term_bound: float = 1.0,
    tail_tol: float = TAIL_TOL,
) -> float:
    """Sum of term(k) * pmf(k) over k = 0..n with certified truncation.

    `term` maps an int64 array of counts to values bounded by `term_bound`
    in absolute value.  The window starts at mode +- (12 sigma + 40) and
    doubles until the geometric tail bound times `term_bound` drops below
    `tail_tol`; windows touching 0 and n have no truncation at all.
    """
    if p <= 0.0:
        return float(term(np.array([0], dtype=np.int64))[0])
    if p >= 1.0:
        return float(term(np.array([n], dtype=np.int64))[0])
    mode = min(int((n + 1) * p), n)
    sigma = math.sqrt(n * p * (1.0 - p))
    width = int(12.0 * sigma + 40.0)
    while True:
        lo = max(0, mode - width)
        hi = min(n, mode + width)
        if n * math.log1p(-p) > _LOG_TINY:
            anchor = lo = 0
        elif n * math.log(p) > _LOG_TINY:
            anchor = hi = n
        else:
            anchor = min(max(mode, lo), hi)
        pmf = _window_pmf(n, p, lo, hi, anchor)
        tail = 0.0
        if lo > 0:
            # Below the window the pmf ratios keep shrinking, so the tail
            # is dominated by a geometric series at the edge ratio.
            r = lo * (1.0 - p) / ((n - lo + 1.0) * p)
            tail += math.inf if r >= 1.0 else pmf[0] * r / (1.0 - r)
        if hi < n:
            r = (n - hi) * p / ((hi + 1.0) * (1.0 - p))
            tail += math.inf if r >= 1.0 else pmf[-1] * r / (1.0 - r)
        if tail * term_bound <= tail_tol:
            ks = np.arange(lo, hi + 1, dtype=np.int64)
            return float(np.dot(term(ks), pmf))
        width *= 2


def binomial_mad_exact(spec: BinomialSpec) -> float:
    """E|X/n - p| for X ~ Binomial(n, p), exact to summation precision."""
    n, p = spec.n, spec.p
    bound = max(p, 1.0 - p)
    return binomial_expectation(n, p, lambda ks: np.abs(ks / n - p), bound)


def _grouped_atoms(p: Distribution) -> list:
    """(value, multiplicity) pairs merged on equal values, sorted ascending.

    The fixed ordering makes the risk sum bit-stable however the per-atom
    terms are later scheduled.
    """
    if isinstance(p, CompressedFamily):
        merged: dict = {}
        for value, mult in p.atoms:
            merged[value] = merged.get(value, 0) + mult
        return sorted(merged.items())
    if isinstance(p, ProbabilityVector):
        values, counts = np.unique(p.probs, return_counts=True)
        return [(float(v), int(c)) for v, c in zip(values, counts)]
    raise TypeError(f"expected ProbabilityVector or CompressedFamily, got {type(p).__name__}")


def estimator_risk_exact(
    p: Distribution,
    estimator: CoordinatewiseEstimator,
    n: int,
) -> float:
    """Exact expected l1 risk of a coordinatewise estimator at distribution p.

    Computed per unique atom value then scaled by multiplicity, so families
    with one repeated tiny value cost constant work per distinct value.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    total = 0.0
    for value, mult in _grouped_atoms(p):

        def loss(ks: np.ndarray, v=value) -> np.ndarray:
            return np.abs(estimator(ks, n) - v)

        total += float(mult) * binomial_expectation(n, value, loss)
    return total


def poisson_pmf(lam: float, k: int) -> float:
    """P(X = k) for X ~ Poisson(lam), via log space."""
    if k < 0 or k != int(k):
        raise ValueError("k must be a nonnegative integer")
    if lam < 0 or not math.isfinite(lam):
        raise ValueError("lam must be finite and nonnegative")
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(-lam + k * math.log(lam) - gammaln(k + 1.0))


def _poisson_window(lam: float, kmax: int) -> np.ndarray:
    if lam == 0.0:
        out = np.zeros(kmax + 1)
        out[0] = 1.0
        return out
    ks = np.arange(kmax + 1, dtype=float)
    return np.exp(-lam + ks * math.log(lam) - gammaln(ks + 1.0))


def _poisson_tail_bound(lam: float, pmf_last: float, kmax: int) -> float:
    if lam == 0.0:
        return 0.0
    r = lam / (kmax + 1.0)
    return math.inf if r >= 1.0 else pmf_last * r / (1.0 - r)


def poisson_tv_exact(pair: PoissonPair) -> float:
    """Total variation distance between Poisson(lambda_lo) and Poisson(lambda_hi).

    Half the absolute pmf difference, summed until the combined remaining
    tail mass of both distributions is below 1e-15.
    """
    lam_lo, lam_hi = pair.lambda_lo, pair.lambda_hi
    if lam_lo == lam_hi:
        return 0.0
    kmax = int(max(lam_hi + 20.0 * math.sqrt(lam_hi + 1.0), 50.0))
    while True:
        pmf_lo = _poisson_window(lam_lo, kmax)
        pmf_hi = _poisson_window(lam_hi, kmax)
        tail = (_poisson_tail_bound(lam_lo, pmf_lo[-1], kmax)
                + _poisson_tail_bound(lam_hi, pmf_hi[-1], kmax))
        if tail < POISSON_TAIL_TOL:
            return float(0.5 * np.abs(pmf_lo - pmf_hi).sum())
        kmax *= 2
