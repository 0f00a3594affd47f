"""Seeded Monte-Carlo risk estimation.

Determinism contract: every replicate draws from its own uniform stream
keyed by a counter-hash of (master_seed, replicate index), so results are
bit-identical across runs, platforms, chunk sizes and thread counts, and
any single replicate can be regenerated in isolation via
`derive_replicate_seed`.

Sampling uses the sequential conditional-Binomial method: coordinate i is
an inverse-CDF Binomial of the remaining budget with renormalized
probability.  Compressed families are sampled per (value, multiplicity)
block, and block counts are split across the block's symbols by uniform
allocation from the same stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import binom as _sp_binom

from .core import CompressedFamily, CountHistogram, Distribution, ProbabilityVector
from .core import MAX_DENSE_SUPPORT
from .estimators import CoordinatewiseEstimator
from .exact import estimator_risk_exact
from .rng import derive_key, derive_seed, stream_key, uniforms

__all__ = [
    "McConfig",
    "McRiskEstimate",
    "ScanResult",
    "sample_multinomial",
    "mc_risk",
    "sup_risk_scan",
    "derive_replicate_seed",
]

# Rows processed per batch in the dense path; keeps peak memory flat.
_CHUNK_CELLS = 2_000_000
# floor(u * multiplicity) is an exact uniform cell index only below 2^53.
_MAX_BLOCK_MULT = 1 << 53


@dataclass(frozen=True)
class McConfig:
    """Replication and seeding parameters for a Monte-Carlo run."""

    replicates: int
    master_seed: int
    confidence_z: float = 3.0

    def __post_init__(self):
        if self.replicates < 100:
            raise ValueError("replicates must be at least 100 for CI reporting")
        if not (0 <= self.master_seed < 1 << 64):
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if not self.confidence_z > 0:
            raise ValueError("confidence_z must be positive")


@dataclass(frozen=True)
class McRiskEstimate:
    """Sample mean of per-replicate l1 losses with a z-score interval."""

    mean: float
    std_error: float
    ci_lo: float
    ci_hi: float
    replicates: int
    master_seed: int


class ScanResult(NamedTuple):
    argmax_index: int
    max_risk: float


def derive_replicate_seed(master_seed: int, replicate: int) -> int:
    """Seed reproducing one replicate of `mc_risk` via `sample_multinomial`."""
    return derive_seed(master_seed, replicate)


def _binomial_inverse(u: np.ndarray, budgets: np.ndarray, q: float) -> np.ndarray:
    """Inverse-CDF Binomial draws, one per (uniform, budget) pair."""
    if q <= 0.0:
        return np.zeros(budgets.shape, dtype=np.int64)
    if q >= 1.0:
        return budgets.copy()
    draws = _sp_binom.ppf(u, budgets, q)
    return np.clip(draws, 0, budgets).astype(np.int64)


def _conditional_chain(keys: np.ndarray, masses: Sequence[float], n: int) -> np.ndarray:
    """Counts for each mass bucket by sequential conditional Binomials.

    keys has shape (R,); the result has shape (R, len(masses)) with rows
    summing to n.  Consumes uniforms 0 .. len(masses)-2 of each stream.
    """
    count = len(masses)
    rows = keys.shape[0]
    out = np.zeros((rows, count), dtype=np.int64)
    if count == 1:
        out[:, 0] = n
        return out
    draws = uniforms(keys, 0, count - 1)
    remaining = np.full(rows, n, dtype=np.int64)
    mass_left = 1.0
    for i in range(count - 1):
        q = masses[i] / mass_left if mass_left > 0 else 1.0
        x = _binomial_inverse(draws[:, i], remaining, q)
        out[:, i] = x
        remaining -= x
        mass_left -= masses[i]
    out[:, count - 1] = remaining
    return out


def _block_cells(key: np.uint64, start: int, total: int, mult: int) -> tuple:
    """Uniform allocation of `total` draws over `mult` cells; returns the
    occupied cell ids, their counts, and the next stream position."""
    us = uniforms(key, start, total)
    cells = np.minimum((us * mult).astype(np.int64), mult - 1)
    occupied, counts = np.unique(cells, return_counts=True)
    return occupied, counts, start + total


def _check_block_mults(fam: CompressedFamily) -> None:
    for _, mult in fam.atoms:
        if mult > _MAX_BLOCK_MULT:
            raise ValueError("atom multiplicity too large to allocate symbols exactly")


def sample_multinomial(p: Distribution, n: int, seed: int) -> CountHistogram:
    """One Multinomial(n, p) draw, deterministic in the seed."""
    if n < 1:
        raise ValueError("n must be positive")
    key = stream_key(seed)
    keys = np.array([key], dtype=np.uint64)
    if isinstance(p, ProbabilityVector):
        counts = _conditional_chain(keys, p.probs.tolist(), n)[0]
        return CountHistogram(counts, n)
    if not isinstance(p, CompressedFamily):
        raise TypeError(f"expected ProbabilityVector or CompressedFamily, got {type(p).__name__}")
    support = p.support_size
    if support > MAX_DENSE_SUPPORT:
        raise ValueError(
            f"support size {support} too large for a dense histogram; "
            "use mc_risk, which never materializes per-symbol counts")
    _check_block_mults(p)
    masses = [v * m for v, m in p.atoms]
    totals = _conditional_chain(keys, masses, n)[0]
    dense = np.zeros(support, dtype=np.int64)
    pos = len(p.atoms) - 1
    offset = 0
    for (value, mult), total in zip(p.atoms, totals):
        if mult == 1:
            dense[offset] = total
        elif total > 0:
            occupied, counts, pos = _block_cells(key, pos, int(total), mult)
            dense[offset + occupied] += counts
        offset += mult
    return CountHistogram(dense, n)


def _dense_losses(
    keys: np.ndarray, p: ProbabilityVector, estimator: CoordinatewiseEstimator, n: int
) -> np.ndarray:
    probs = p.probs
    masses = probs.tolist()
    chunk = max(1, _CHUNK_CELLS // max(1, probs.size))
    losses = np.empty(keys.shape[0])
    for start in range(0, keys.shape[0], chunk):
        block = keys[start:start + chunk]
        counts = _conditional_chain(block, masses, n)
        estimates = estimator(counts, n)
        losses[start:start + chunk] = np.abs(estimates - probs).sum(axis=1)
    return losses


def _compressed_losses(
    keys: np.ndarray, fam: CompressedFamily, estimator: CoordinatewiseEstimator, n: int
) -> np.ndarray:
    """Per-replicate l1 losses without materializing per-symbol counts.

    Unoccupied symbols inside a block all contribute |f(0) - value|, so only
    the occupied cells of each block are ever touched.
    """
    _check_block_mults(fam)
    atoms = fam.atoms
    masses = [v * m for v, m in atoms]
    totals = _conditional_chain(keys, masses, n)
    at_zero = float(estimator(np.zeros(1, dtype=np.int64), n)[0])
    losses = np.empty(keys.shape[0])
    for r in range(keys.shape[0]):
        pos = len(atoms) - 1
        acc = 0.0
        for a, (value, mult) in enumerate(atoms):
            total = int(totals[r, a])
            if mult == 1:
                est = float(estimator(np.array([total], dtype=np.int64), n)[0])
                acc += abs(est - value)
            elif total == 0:
                acc += mult * abs(at_zero - value)
            else:
                _, cell_counts, pos = _block_cells(keys[r], pos, total, mult)
                estimates = estimator(cell_counts, n)
                acc += (mult - cell_counts.size) * abs(at_zero - value)
                acc += float(np.abs(estimates - value).sum())
        losses[r] = acc
    return losses


def mc_risk(
    p: Distribution,
    estimator: CoordinatewiseEstimator,
    n: int,
    cfg: McConfig,
) -> McRiskEstimate:
    """Monte-Carlo estimate of the expected l1 risk with a z-score CI.

    Losses are accumulated in replicate-index order, so the reported mean
    does not depend on batching.
    """
    if n < 1:
        raise ValueError("n must be positive")
    keys = derive_key(cfg.master_seed, np.arange(cfg.replicates, dtype=np.uint64))
    if isinstance(p, ProbabilityVector):
        losses = _dense_losses(keys, p, estimator, n)
    elif isinstance(p, CompressedFamily):
        losses = _compressed_losses(keys, p, estimator, n)
    else:
        raise TypeError(f"expected ProbabilityVector or CompressedFamily, got {type(p).__name__}")
    reps = cfg.replicates
    mean = float(losses.sum() / reps)
    variance = float(np.square(losses - mean).sum() / (reps - 1))
    std_error = math.sqrt(variance / reps)
    half = cfg.confidence_z * std_error
    return McRiskEstimate(mean, std_error, mean - half, mean + half, reps, cfg.master_seed)


def sup_risk_scan(
    family_grid: Sequence[Distribution],
    estimator: CoordinatewiseEstimator,
    n: int,
    mode: str = "exact",
    cfg: McConfig | None = None,
) -> ScanResult:
    """Risk of each candidate family; returns the first maximizer.

    mode "exact" uses the enumeration-based risk, "mc" the Monte-Carlo mean
    (requires cfg).  Ties break toward the lowest grid index.
    """
    if len(family_grid) == 0:
        raise ValueError("family grid must be non-empty")
    if mode not in ("exact", "mc"):
        raise ValueError(f"mode must be 'exact' or 'mc', got {mode!r}")
    if mode == "mc" and cfg is None:
        raise ValueError("mc mode requires a McConfig")
    risks = []
    for fam in family_grid:
        if mode == "exact":
            risks.append(estimator_risk_exact(fam, estimator, n))
        else:
            risks.append(mc_risk(fam, estimator, n, cfg).mean)
    best = int(np.argmax(risks))
    return ScanResult(best, risks[best])
