"""Tail bounds and significance thresholds for overlap counts.

Bounds are inequalities, so the threshold helpers work in floating point.
Exact p-values (when the instance can be enumerated) stay rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .combinatorics import GHGDError, Instance, pmf_full_overlap
from .moments import expectation_full, mean_for, variance_for, variance_full
from .oracle import EnumerationBudgetExceeded, check_budget, enumerate_distribution

CHEBYSHEV_EQ14 = "chebyshev-eq14"
CHEBYSHEV_GENERAL = "chebyshev-general"
VYSOCHANSKII_PETUNIN = "vysochanskii-petunin"
EXACT_ENUMERATION = "exact-enumeration"
EXACT_FULL_OVERLAP = "exact-full-overlap"

Number = Union[Fraction, float, int]


@dataclass(frozen=True)
class BoundReport:
    """Estimate of ``P(x >= threshold)`` and how it was obtained.

    ``approximate`` is only set for the small-mean form ``mean / (1 - mean)^2``
    where the variance has been replaced by the mean.
    """

    mean: Number
    variance: Number
    method: str
    threshold: int
    bound: Number
    valid: bool = True
    reason: Optional[str] = None
    approximate: Optional[float] = None


@dataclass(frozen=True)
class MeanVarianceGap:
    mean: Fraction
    variance: Fraction
    gap: Fraction
    ratio: Optional[Fraction]

    @property
    def ratio_below_mean(self) -> Optional[bool]:
        return None if self.ratio is None else self.ratio < self.mean


def chebyshev_p_at_least_one(mean: Number, variance: Number) -> BoundReport:
    """Bound ``P(x >= 1)`` for a non-negative count with small mean.

    Reports ``variance / (1 - mean)^2`` as the bound and the variance-free
    ``mean / (1 - mean)^2`` as ``approximate``.  Both are clamped to 1.
    """
    mu, var = float(mean), float(variance)
    if mu >= 1:
        return BoundReport(
            mean, variance, CHEBYSHEV_EQ14, 1, 1.0, valid=False,
            reason="mean >= 1: the bound is vacuous",
        )
    gap = (1 - mu) ** 2
    return BoundReport(
        mean, variance, CHEBYSHEV_EQ14, 1, min(var / gap, 1.0),
        approximate=min(mu / gap, 1.0),
    )


def vp_sigma_multiplier(alpha: float, integer: bool = True) -> float:
    """Smallest ``lam`` with Vysochanskii-Petunin ``P(|x - mu| >= lam sigma) <= alpha``.

    With ``integer`` (the default) ``lam`` is rounded up to whole sigmas, which
    turns ``alpha = 0.05`` into the familiar 3-sigma rule.
    """
    if not 0 < alpha < 1:
        raise GHGDError(f"alpha must be in (0, 1), got {alpha}")
    lam = 2 / (3 * math.sqrt(alpha))
    if lam <= math.sqrt(8 / 3):
        # lower branch of the inequality: 4 / (3 lam^2) - 1/3 <= alpha
        lam = 2 / math.sqrt(3 * alpha + 1)
    if integer:
        # guard against 2.9999999999999996 style rounding before ceil
        lam = math.ceil(round(lam, 12))
    return lam


def max_mean_for_alpha(alpha: float, method: str = CHEBYSHEV_EQ14, integer_sigma: bool = True) -> float:
    """Largest mean for which ``P(x >= 1) <= alpha`` under the chosen bound.

    chebyshev-eq14 solves ``E / (1 - E)^2 = alpha``.  vysochanskii-petunin
    takes ``sigma^2 = E`` and solves ``E + lam sqrt(E) = 1``.
    """
    if not 0 < alpha < 1:
        raise GHGDError(f"alpha must be in (0, 1), got {alpha}")
    if method == CHEBYSHEV_EQ14:
        # root in (0, 1) of alpha E^2 - (2 alpha + 1) E + alpha = 0
        return ((2 * alpha + 1) - math.sqrt(4 * alpha + 1)) / (2 * alpha)
    if method == VYSOCHANSKII_PETUNIN:
        lam = vp_sigma_multiplier(alpha, integer_sigma)
        root = (math.sqrt(lam * lam + 4) - lam) / 2
        return root * root
    raise GHGDError(f"unknown threshold method {method!r}")


def mean_variance_gap(inst: Instance) -> MeanVarianceGap:
    """``E(x_T) - Var(x_T)`` and its size relative to the mean.

    The ratio equals ``E(x_T | n, M) - E(x_T | n - 1, M - 1)``, so it vanishes
    together with the mean.
    """
    mean, var = expectation_full(inst), variance_full(inst)
    gap = mean - var
    ratio = gap / mean if mean else None
    return MeanVarianceGap(mean, var, gap, ratio)


def gap_ratio_identity(inst: Instance) -> Fraction:
    """``prod(m) / n^(T-1) - prod(m - 1) / (n - 1)^(T-1)`` written out directly."""
    n, T = inst.n, inst.T
    first = Fraction(math.prod(inst.m), n ** (T - 1))
    shifted = math.prod(mi - 1 for mi in inst.m)
    second = Fraction(shifted, (n - 1) ** (T - 1)) if shifted else Fraction(0)
    return first - second


def chebyshev_tail_bound(mean: Number, variance: Number, k: int) -> Number:
    """``variance / (k - mean)^2`` clamped to 1; uninformative (1) when ``k <= mean``."""
    if k <= mean:
        return 1 if isinstance(mean, float) or isinstance(variance, float) else Fraction(1)
    return min(variance / (k - mean) ** 2, 1)


def overlap_significance(
    inst: Instance, t: int, mode: str, observed_k: int, budget: Optional[int] = None
) -> BoundReport:
    """Probability of seeing at least ``observed_k`` overlapping elements.

    Exact when possible: the full-overlap pmf for ``t == T``, otherwise
    enumeration within ``budget``.  Falls back to a Chebyshev tail bound built
    from the exact mean and variance.
    """
    if observed_k < 0:
        raise GHGDError(f"observed_k must be >= 0, got {observed_k}")
    mean, var = mean_for(inst, t, mode), variance_for(inst, t, mode)
    if t == inst.T:
        p = pmf_full_overlap(inst).tail(observed_k)
        return BoundReport(mean, var, EXACT_FULL_OVERLAP, observed_k, p)
    try:
        check_budget(inst, budget)
    except EnumerationBudgetExceeded as exc:
        reason = f"not enumerable ({exc.configurations} configurations)"
        bound = chebyshev_tail_bound(mean, var, observed_k)
        if observed_k <= mean:
            reason += "; observed count does not exceed the mean"
        return BoundReport(mean, var, CHEBYSHEV_GENERAL, observed_k, bound, reason=reason)
    p = enumerate_distribution(inst, t, mode, budget).tail(observed_k)
    return BoundReport(mean, var, EXACT_ENUMERATION, observed_k, p)

