"""Shared oracles for the test suite.

The brute-force helpers here deliberately avoid the library's computation
paths: risks come from full Multinomial enumeration, pmfs from exact
integer combinatorics, so they can vouch for the fast implementations.
"""

import math

import numpy as np
import pytest


def compositions(n, parts):
    """All nonnegative integer vectors of length `parts` summing to n."""
    if parts == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for rest in compositions(n - head, parts - 1):
            yield (head,) + rest


def multinomial_pmf(counts, probs):
    """Exact multinomial pmf via integer coefficients (small cases only)."""
    n = sum(counts)
    coef = math.factorial(n)
    for c in counts:
        coef //= math.factorial(c)
    value = float(coef)
    for c, p in zip(counts, probs):
        if c > 0:
            if p == 0.0:
                return 0.0
            value *= p ** c
    return value


def brute_force_risk(probs, estimator, n):
    """Expected l1 loss by full outcome enumeration."""
    probs = np.asarray(probs, dtype=float)
    total = 0.0
    for counts in compositions(n, probs.size):
        pmf = multinomial_pmf(counts, probs)
        if pmf == 0.0:
            continue
        estimates = estimator(np.array(counts, dtype=np.int64), n)
        total += pmf * float(np.abs(estimates - probs).sum())
    return total


def exact_binomial_tail_upper(n, p, threshold):
    """P(X >= threshold) for X ~ Binomial(n, p), threshold real."""
    from scipy.stats import binom
    k0 = math.ceil(threshold)
    if k0 > n:
        return 0.0
    return float(binom.sf(k0 - 1, n, p))


def exact_poisson_tail_upper(lam, threshold):
    """P(X >= threshold) for X ~ Poisson(lam), threshold real."""
    from scipy.stats import poisson
    k0 = math.ceil(threshold)
    return float(poisson.sf(k0 - 1, lam))


def exact_poisson_tail_lower(lam, threshold):
    """P(X <= threshold) for X ~ Poisson(lam), threshold real."""
    from scipy.stats import poisson
    return float(poisson.cdf(math.floor(threshold), lam))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
