"""Brute-force ground truth: exhaustive enumeration and a seeded sampler.

Nothing in this module uses the closed forms in :mod:`ghgd.moments`; it only
counts.  Every configuration of ``T`` subsets is visited once by an odometer
over per-subset combination lists.

Configurations are packed into one integer per subset.  Element ``e`` owns a
``T``-bit digit at bit offset ``T * e``, and subset ``i`` sets bit ``i`` of the
digit of each of its members.  Adding the ``T`` packed subsets therefore never
carries, and digit ``e`` of the sum is the membership pattern of element ``e``
(which subsets contain it).
"""
from __future__ import annotations

import functools
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from .combinatorics import (
    AT_LEAST_T,
    EXACT_T,
    MODES,
    DistributionTable,
    GHGDError,
    Instance,
    total_configurations,
)

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "GHGD_ENUM_BUDGET"


class EnumerationBudgetExceeded(GHGDError):
    def __init__(self, configurations: int, budget: int):
        super().__init__(
            f"{configurations} configurations exceed the enumeration budget of {budget}"
        )
        self.configurations = configurations
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise GHGDError(f"{BUDGET_ENV}={raw!r} is not an integer") from None


def check_budget(inst: Instance, budget: Optional[int] = None) -> int:
    """Return the configuration count, or raise if it exceeds ``budget``."""
    if budget is None:
        budget = default_budget()
    total = total_configurations(inst)
    if total > budget:
        raise EnumerationBudgetExceeded(total, budget)
    return total


@dataclass(frozen=True)
class OverlapProfile:
    """``counts[t]`` = number of elements lying in exactly ``t`` subsets."""

    counts: Tuple[int, ...]

    def exact(self, t: int) -> int:
        return self.counts[t]

    def at_least(self, t: int) -> int:
        return sum(self.counts[t:])


@dataclass(frozen=True)
class SampleStats:
    trials: int
    mean: Fraction
    variance: Fraction
    min: int
    max: int
    seed: int

    @property
    def standard_error(self) -> float:
        return float(self.variance / self.trials) ** 0.5


def _packed_pool(n: int, T: int, i: int, m: int) -> List[int]:
    return [sum(1 << (T * e + i) for e in c) for c in combinations(range(n), m)]


@functools.lru_cache(maxsize=64)
def _pattern_tally(n: int, m: Tuple[int, ...]) -> Dict[Tuple[int, ...], int]:
    T = len(m)
    pools = [_packed_pool(n, T, i, mi) for i, mi in enumerate(m)]
    sums: Counter = Counter()

    def odometer(i: int, partial: int) -> None:
        if i == T - 1:
            sums.update(partial + c for c in pools[i])
            return
        for c in pools[i]:
            odometer(i + 1, partial + c)

    odometer(0, 0)

    digit = (1 << T) - 1
    tally: Counter = Counter()
    for packed, weight in sums.items():
        per_pattern = [0] * (1 << T)
        for e in range(n):
            per_pattern[(packed >> (T * e)) & digit] += 1
        tally[tuple(per_pattern)] += weight
    return dict(tally)


def pattern_tally(inst: Instance, budget: Optional[int] = None) -> Dict[Tuple[int, ...], int]:
    """Enumerate every configuration and tally pattern-count vectors.

    A key ``c`` has ``c[p]`` = number of elements whose membership bitmask is
    ``p`` (bit ``i`` set iff the element is in subset ``i``); the value is the
    number of configurations producing it.  Values sum to the total number of
    configurations.
    """
    check_budget(inst, budget)
    return _pattern_tally(inst.n, inst.m)


def enumerate_overlap_profiles(inst: Instance, budget: Optional[int] = None) -> Dict[OverlapProfile, int]:
    T = inst.T
    levels = [bin(p).count("1") for p in range(1 << T)]
    out: Counter = Counter()
    for counts, weight in pattern_tally(inst, budget).items():
        per_level = [0] * (T + 1)
        for p, c in enumerate(counts):
            per_level[levels[p]] += c
        out[OverlapProfile(tuple(per_level))] += weight
    return dict(out)


def _k_max(inst: Instance, t: int) -> int:
    if t == 0:
        return inst.n
    if t == inst.T:
        return inst.m_min
    return min(sum(inst.m), inst.n)


def enumerate_distribution(
    inst: Instance, t: int, mode: str = EXACT_T, budget: Optional[int] = None
) -> DistributionTable:
    """Exact pmf of ``x_t`` (or ``x_{>=t}``) by visiting every configuration."""
    if mode not in MODES:
        raise GHGDError(f"mode must be one of {MODES}, got {mode!r}")
    if not 0 <= t <= inst.T:
        raise GHGDError(f"t must be in 0..{inst.T}, got {t!r}")
    total = check_budget(inst, budget)
    tallies = [0] * (_k_max(inst, t) + 1)
    for profile, weight in enumerate_overlap_profiles(inst, budget).items():
        k = profile.exact(t) if mode == EXACT_T else profile.at_least(t)
        tallies[k] += weight
    return DistributionTable(mode, t, tuple(Fraction(c, total) for c in tallies))


def oracle_cross_moment(inst: Instance, a, b, budget: Optional[int] = None) -> Fraction:
    """``E(x_a * x_b)`` by enumeration, ``a`` and ``b`` being subset selections.

    ``x_a`` counts the elements contained in exactly the subsets of ``a``.
    Identical selections are allowed and give ``E(x_a^2)``.
    """
    pa = sum(1 << i for i in a.indices)
    pb = sum(1 << i for i in b.indices)
    total = check_budget(inst, budget)
    acc = sum(c[pa] * c[pb] * w for c, w in pattern_tally(inst, budget).items())
    return Fraction(acc, total)


def _trial_subsets(inst: Instance, rng: np.random.Generator) -> List[List[int]]:
    n = inst.n
    out = []
    for m in inst.m:
        perm = list(range(n))
        # partial Fisher-Yates: position k swaps with a uniform index in [k, n)
        for k, j in enumerate(rng.integers(np.arange(m), n).tolist() if m else ()):
            perm[k], perm[j] = perm[j], perm[k]
        out.append(perm[:m])
    return out


def simulate(
    inst: Instance, t: int, mode: str = EXACT_T, trials: int = 10_000, seed: int = 0
) -> SampleStats:
    """Monte Carlo estimate of ``x_t`` / ``x_{>=t}``.

    Trial ``i`` draws from ``numpy.random.default_rng([seed, i])`` so every
    trial is reproducible on its own, independent of the others.  Each subset
    is the first ``m_i`` entries of a partial Fisher-Yates shuffle of
    ``0..n-1`` started from the identity, subsets drawn in index order.
    """
    if mode not in MODES:
        raise GHGDError(f"mode must be one of {MODES}, got {mode!r}")
    if not 0 <= t <= inst.T:
        raise GHGDError(f"t must be in 0..{inst.T}, got {t!r}")
    if trials < 1:
        raise GHGDError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise GHGDError(f"seed must be non-negative, got {seed}")
    total = total_sq = 0
    lo = hi = None
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        level = [0] * inst.n
        for subset in _trial_subsets(inst, rng):
            for e in subset:
                level[e] += 1
        if mode == EXACT_T:
            x = level.count(t)
        else:
            x = sum(1 for lv in level if lv >= t)
        total += x
        total_sq += x * x
        lo = x if lo is None or x < lo else lo
        hi = x if hi is None or x > hi else hi
    mean = Fraction(total, trials)
    if trials > 1:
        variance = (total_sq - trials * mean**2) / (trials - 1)
    else:
        variance = Fraction(0)
    return SampleStats(trials, mean, variance, lo, hi, seed)
