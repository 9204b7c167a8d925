"""Exact counting for the general hypergeometric distribution.

An :class:`Instance` is a population of ``n`` elements together with the sizes
``m_1..m_T`` of ``T`` subsets, each drawn uniformly and independently.  All
counts are Python integers and all probabilities are :class:`fractions.Fraction`,
so nothing here ever rounds.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

EXACT_T = "exact-t"
AT_LEAST_T = "at-least-t"
FULL_OVERLAP = "full-overlap"
MODES = (EXACT_T, AT_LEAST_T)


class GHGDError(ValueError):
    """Raised when arguments fall outside an operation's domain."""


@dataclass(frozen=True)
class Instance:
    """Population size ``n`` and subset sizes ``m`` (kept in caller order)."""

    n: int
    m: Tuple[int, ...]

    def __init__(self, n: int, m: Sequence[int]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", tuple(m))
        self._validate()

    def _validate(self) -> None:
        n, m = self.n, self.m
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise GHGDError(f"n must be a positive integer, got {n!r}")
        if len(m) < 2:
            raise GHGDError(f"need at least two subsets, got {len(m)}")
        for i, mi in enumerate(m):
            if isinstance(mi, bool) or not isinstance(mi, int):
                raise GHGDError(f"m[{i}] must be an integer, got {mi!r}")
            if not 0 <= mi <= n:
                raise GHGDError(f"m[{i}] = {mi} is outside [0, n={n}]")

    @property
    def T(self) -> int:
        return len(self.m)

    @property
    def m_min(self) -> int:
        return min(self.m)

    def key(self) -> Tuple[int, Tuple[int, ...]]:
        """Permutation-invariant cache key."""
        return self.n, tuple(sorted(self.m))


@dataclass(frozen=True)
class DistributionTable:
    """Exact pmf of one overlap variable over ``k = 0..len(probs)-1``."""

    kind: str
    t: int
    probs: Tuple[Fraction, ...]

    @property
    def k_max(self) -> int:
        return len(self.probs) - 1

    @property
    def support(self) -> range:
        return range(len(self.probs))

    def mean(self) -> Fraction:
        return sum((k * p for k, p in enumerate(self.probs)), Fraction(0))

    def raw_moment(self, v: int) -> Fraction:
        return sum((Fraction(k) ** v * p for k, p in enumerate(self.probs)), Fraction(0))

    def central_moment(self, v: int) -> Fraction:
        mu = self.mean()
        return sum(((k - mu) ** v * p for k, p in enumerate(self.probs)), Fraction(0))

    def variance(self) -> Fraction:
        return self.central_moment(2)

    def tail(self, k: int) -> Fraction:
        """``P(x >= k)``."""
        return sum(self.probs[max(k, 0):], Fraction(0))


def binomial(m: int, k: int) -> int:
    """C(m, k); zero outside ``0 <= k <= m``."""
    if m < 0:
        raise GHGDError(f"binomial requires m >= 0, got {m}")
    if k < 0 or k > m:
        return 0
    return math.comb(m, k)


def total_configurations(inst: Instance) -> int:
    """Number of ways to draw all ``T`` subsets: prod C(n, m_i)."""
    return math.prod(binomial(inst.n, mi) for mi in inst.m)


@functools.lru_cache(maxsize=4096)
def _full_overlap_counts(n: int, m: Tuple[int, ...]) -> Tuple[int, ...]:
    m_min = min(m)
    counts: List[int] = [0] * (m_min + 1)
    for k in range(m_min, -1, -1):
        c = binomial(n, k) * math.prod(binomial(n - k, mi - k) for mi in m)
        for i in range(k + 1, m_min + 1):
            c -= binomial(i, k) * counts[i]
        counts[k] = c
    return tuple(counts)


def full_overlap_counts(inst: Instance) -> Tuple[int, ...]:
    """Counts ``C(x_T = k)`` for ``k = 0..m_min`` in one top-down pass.

    Starts at ``k = m_min`` where the correction sum is empty and works down,
    subtracting over-counted configurations with ``C(i, k) * C(x_T = i)``.
    Cached on the sorted size list.
    """
    return _full_overlap_counts(*inst.key())


def count_full_overlap(inst: Instance, k: int) -> int:
    """Number of configurations with exactly ``k`` elements common to all subsets."""
    if k < 0:
        raise GHGDError(f"k must be non-negative, got {k}")
    if k > inst.m_min:
        return 0
    return full_overlap_counts(inst)[k]


def pmf_full_overlap(inst: Instance) -> DistributionTable:
    total = total_configurations(inst)
    probs = tuple(Fraction(c, total) for c in full_overlap_counts(inst))
    return DistributionTable(FULL_OVERLAP, inst.T, probs)


def classical_hypergeometric_pmf(n: int, m1: int, m2: int) -> Tuple[Fraction, ...]:
    """Textbook two-set pmf, C(m1,k) C(n-m1,m2-k) / C(n,m2) for k = 0..min(m1,m2)."""
    total = binomial(n, m2)
    return tuple(
        Fraction(binomial(m1, k) * binomial(n - m1, m2 - k), total)
        for k in range(min(m1, m2) + 1)
    )
