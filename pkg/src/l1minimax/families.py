"""Worst-case families, unfavorable priors, and exact Bayes-risk oracles.

The two constructions are a near-flat family of many tiny equal atoms plus
one heavy atom (hitting a target entropy), and a two-point product prior
under Poissonized sampling.  Their Bayes risks admit exact evaluation and
serve as oracles for the closed-form lower bounds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds import BoundValue, HighDimParams, hoeffding_bound
from .core import CompressedFamily, ProbabilityVector
from .exact import PoissonPair, poisson_tv_exact
from .rng import stream_key, uniforms

__all__ = [
    "EntropyBallFamily",
    "TwoPointPrior",
    "CompositePrior",
    "CompositeDraw",
    "ExpectedDistinct",
    "EntropyBallBayesRisk",
    "entropy_ball_family",
    "two_point_prior",
    "bayes_risk_two_point",
    "bayes_risk_two_point_piecewise",
    "assembled_minimax_lower_hd",
    "expected_distinct",
    "bayes_risk_entropy_ball",
    "bayes_risk_entropy_ball_constrained",
    "sample_from_composite_prior",
]

logger = logging.getLogger(__name__)

_E = math.exp(1.0)

# exp() overflows past ~709; larger families would need atom values below
# the double-precision range anyway.
_MAX_LOG_SUPPORT = 700.0
# Slot indices are derived from floor(u * population), exact only below 2^53.
_MAX_SAMPLED_POPULATION = 1 << 53
_MAX_SAMPLED_ACTIVE = 10_000_000


@dataclass(frozen=True)
class EntropyBallFamily:
    """S' tiny atoms of mass delta/S' plus one heavy atom of mass 1 - delta.

    `achieved_entropy` is recomputed after the integer rounding of S', so it
    is always at least the requested target.
    """

    delta: float
    S_prime: int
    achieved_entropy: float
    family: CompressedFamily


def entropy_ball_family(H: float, delta: float) -> EntropyBallFamily:
    """Solve delta ln S' - delta ln delta - (1-delta) ln(1-delta) = H for S'.

    S' is rounded up to an integer and the entropy recomputed; rounding can
    only increase the entropy, and the deviation is logged.
    """
    if not H > 0:
        raise ValueError("H must be positive")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    log_sp = math.log(delta) + H / delta + (1.0 - delta) / delta * math.log1p(-delta)
    if log_sp < 0.0:
        raise ValueError(
            f"infeasible: delta={delta:g} too large for H={H:g} (S' would be below 1)")
    if log_sp > _MAX_LOG_SUPPORT:
        raise ValueError(
            f"family support exp({log_sp:.1f}) exceeds double-precision range")
    sp_real = math.exp(log_sp)
    sp = math.ceil(sp_real)
    achieved = (delta * math.log(sp) - delta * math.log(delta)
                - (1.0 - delta) * math.log1p(-delta))
    logger.debug("entropy ball H=%g delta=%g: S'=%d (real %.6g), entropy excess %.3e",
                 H, delta, sp, sp_real, achieved - H)
    family = CompressedFamily(((delta / sp, sp), (1.0 - delta, 1)))
    return EntropyBallFamily(delta, sp, achieved, family)


@dataclass(frozen=True)
class TwoPointPrior:
    """Product prior putting each coordinate at (1 +- eta_prior)/S equally.

    `n` may be fractional: under Poissonization the sample size only enters
    through the rates n(1 +- eta_prior)/S.
    """

    S: int
    n: float
    eta_prior: float

    def __post_init__(self):
        if self.S < 2:
            raise ValueError("S must be at least 2")
        if not self.n >= 1:
            raise ValueError("n must be at least 1")
        if not (0.0 < self.eta_prior <= 1.0):
            raise ValueError("eta_prior must lie in (0, 1]")

    @property
    def atom_lo(self) -> float:
        return (1.0 - self.eta_prior) / self.S

    @property
    def atom_hi(self) -> float:
        return (1.0 + self.eta_prior) / self.S


def two_point_prior(S: int, n: float) -> TwoPointPrior:
    """Prior with the risk-maximizing perturbation min{1, sqrt(eS/n)/4}."""
    eta = min(1.0, 0.25 * math.sqrt(_E * S / n))
    return TwoPointPrior(S, n, eta)


def bayes_risk_two_point(prior: TwoPointPrior) -> float:
    """Poissonized Bayes-risk lower bound eta (1 - TV) with exact Poisson TV.

    Dominates the piecewise closed form, which replaces the exact TV by its
    analytic upper bound.
    """
    S, n, eta = prior.S, prior.n, prior.eta_prior
    tv = poisson_tv_exact(PoissonPair(n * (1.0 - eta) / S, n * (1.0 + eta) / S))
    return eta * (1.0 - tv)


def bayes_risk_two_point_piecewise(S: int, n: float) -> float:
    """Closed-form floor for the two-point Bayes risk at the tuned eta."""
    if S < 2 or n < 1:
        raise ValueError("need S >= 2 and n >= 1")
    if n / S <= _E / 16.0:
        return math.exp(-2.0 * n / S)
    return 0.125 * math.sqrt(_E * S / n)


def assembled_minimax_lower_hd(params: HighDimParams) -> BoundValue:
    """High-dimensional lower bound assembled from its proof ingredients.

    Exact two-point Bayes risk at inflated sample size (1 + zeta) n, minus
    the Poissonization penalty exp(-zeta^2 n / 24), minus six times the
    concentration mass of the prior outside the approximate simplex.  Uses
    exact quantities where the closed-form statement uses bounds, so it
    dominates `bounds.minimax_lower_hd` whenever both are meaningful.
    """
    S, n, zeta = params.S, params.n, params.zeta
    if S < 3:
        raise ValueError("S must be at least 3 (needs ln S > 1)")
    bayes = bayes_risk_two_point(two_point_prior(S, (1.0 + zeta) * n))
    escape_mass = hoeffding_bound(S, 2.0 / S, zeta / (4.0 * math.log(S)))
    value = bayes - math.exp(-zeta * zeta * n / 24.0) - 6.0 * escape_mass
    return BoundValue(value, vacuous=value <= 0.0)


class ExpectedDistinct(NamedTuple):
    """Expected occupied-slot count and its linear cap n * delta."""

    value: float
    cap: float


def expected_distinct(S_prime: int, delta: float, n: int) -> ExpectedDistinct:
    """E N = S' (1 - (1 - delta/S')^n) for n draws over S' tiny atoms."""
    if S_prime < 1:
        raise ValueError("S_prime must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not (0.0 <= delta <= 1.0):
        raise ValueError("delta must lie in [0, 1]")
    q = delta / S_prime
    if q > 1.0:
        raise ValueError("delta / S_prime must not exceed 1")
    value = -S_prime * math.expm1(n * math.log1p(-q)) if q < 1.0 else float(S_prime)
    return ExpectedDistinct(value, n * delta)


@dataclass(frozen=True)
class CompositePrior:
    """Uniform prior over vectors with S' active slots among k S' candidates.

    Each member puts delta/S' on its active slots and 1 - delta on a fixed
    final coordinate; all members share the same entropy.
    """

    H: float
    delta: float
    S_prime: int
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.S_prime < 1:
            raise ValueError("S_prime must be positive")
        if not (0.0 < self.delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        if not self.H > 0:
            raise ValueError("H must be positive")

    @property
    def support_size(self) -> int:
        return self.k * self.S_prime + 1

    @classmethod
    def from_family(cls, fam: EntropyBallFamily, k: int) -> "CompositePrior":
        return cls(fam.achieved_entropy, fam.delta, fam.S_prime, k)


def _occupied_fraction(cp: CompositePrior, n: int) -> float:
    q = cp.delta / cp.S_prime
    return -math.expm1(n * math.log1p(-q)) if q < 1.0 else 1.0


class EntropyBallBayesRisk(NamedTuple):
    """Bayes risk (1 - E N / S') delta in exact and linearized forms.

    `linearized` replaces the expected occupancy E N by its cap n * delta,
    which can only shrink the value (to zero or below once n delta >= S').
    """

    exact: float
    linearized: float


def bayes_risk_entropy_ball(cp: CompositePrior, n: int) -> EntropyBallBayesRisk:
    """Exact Bayes risk of the composite prior under Multinomial sampling."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    exact = (1.0 - _occupied_fraction(cp, n)) * cp.delta
    linearized = (1.0 - n * cp.delta / cp.S_prime) * cp.delta
    return EntropyBallBayesRisk(exact, linearized)


def bayes_risk_entropy_ball_constrained(cp: CompositePrior, n: int) -> float:
    """Bayes risk when estimates must stay on the simplex: the 2(k-1)/k floor."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    factor = 2.0 * (cp.k - 1) / cp.k
    return factor * (1.0 - _occupied_fraction(cp, n)) * cp.delta


@dataclass(frozen=True)
class CompositeDraw:
    """One draw from the composite prior: active slots plus the shared multiset."""

    prior: CompositePrior
    active_slots: tuple
    family: CompressedFamily

    def dense(self) -> ProbabilityVector:
        """Materialized vector over all k S' + 1 coordinates."""
        cp = self.prior
        probs = np.zeros(cp.support_size)
        probs[list(self.active_slots)] = cp.delta / cp.S_prime
        probs[-1] = 1.0 - cp.delta
        return ProbabilityVector(probs)


def sample_from_composite_prior(cp: CompositePrior, seed: int) -> CompositeDraw:
    """Uniformly random size-S' subset of the k S' slots, deterministic in seed.

    Floyd's subset sampling: O(S') work and memory, no dense materialization.
    """
    population = cp.k * cp.S_prime
    if population > _MAX_SAMPLED_POPULATION:
        raise ValueError("slot population too large to index exactly")
    if cp.S_prime > _MAX_SAMPLED_ACTIVE:
        raise ValueError("S_prime too large to sample at desk scale")
    us = uniforms(stream_key(seed), 0, cp.S_prime)
    chosen = set()
    for step, i in enumerate(range(population - cp.S_prime, population)):
        j = int(us[step] * (i + 1))
        chosen.add(i if j in chosen else j)
    family = CompressedFamily(((cp.delta / cp.S_prime, cp.S_prime), (1.0 - cp.delta, 1)))
    return CompositeDraw(cp, tuple(sorted(chosen)), family)
