"""Closed-form moments of the overlap variables ``x_T``, ``x_t`` and ``x_{>=t}``.

``x_t`` decomposes into one term per choice of ``t`` subsets: the number of
elements lying in exactly those subsets and in none of the others.  Each term
is a full-overlap variable on an *extended* size list, where every unchosen
subset is replaced by its complement (size ``n - m_i``).  Means follow from
that decomposition directly; second moments add pairwise cross terms whose
value depends only on which entries two extended lists share.

Everything is exact: inputs are integers and results are Fractions.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from .combinatorics import AT_LEAST_T, EXACT_T, MODES, GHGDError, Instance, binomial

DIRECT = "direct"
COMPLEMENT = "complement"

# Denominator of the pairwise cross moment E(x_a * x_b).  Two candidates are
# in circulation; only "lemma2" agrees with exhaustive enumeration (see
# tests/test_moments.py::test_cross_moment_denominator_arbitration).
CROSS_DENOMINATORS = {
    "lemma2": lambda n, T: n ** (T - 1) * (n - 1) ** (T - 1),
    "printed": lambda n, T: n**T * (n - 1) ** (T - 1),
}
CROSS_MOMENT_DENOMINATOR = "lemma2"


@dataclass(frozen=True)
class SignedSize:
    """One entry of an extended size list.

    Equality and hashing use ``(index, polarity)`` only, so two entries with
    coincidentally equal values are still different entries.
    """

    index: int
    polarity: str
    value: int = field(compare=False)


@dataclass(frozen=True)
class SubsetSelection:
    instance: Instance
    indices: Tuple[int, ...]
    extended: Tuple[SignedSize, ...]

    @property
    def t(self) -> int:
        return len(self.indices)

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(s.value for s in self.extended)


@dataclass(frozen=True)
class SamePartition:
    same: Tuple[SignedSize, ...]
    no_same: Tuple[SignedSize, ...]


@dataclass(frozen=True)
class MomentReport:
    t: int
    mode: str
    mean: Fraction
    second_moment: Fraction
    variance: Fraction
    raw_moments: Tuple[Fraction, ...] = ()
    central_moments: Tuple[Fraction, ...] = ()


# -- full overlap ---------------------------------------------------------


def _mean_full(n: int, sizes: Sequence[int]) -> Fraction:
    # a non-positive size (possible after shifting n, M down by one) means no
    # element can be in every subset
    if any(s <= 0 for s in sizes):
        return Fraction(0)
    return Fraction(math.prod(sizes), n ** (len(sizes) - 1))


@functools.lru_cache(maxsize=8192)
def _raw_full(n: int, sizes: Tuple[int, ...], v: int) -> Fraction:
    if v == 0:
        return Fraction(1)
    mean = _mean_full(n, sizes)
    if mean == 0:
        return mean
    shifted = tuple(s - 1 for s in sizes)
    return mean * sum(
        (binomial(v - 1, i) * _raw_full(n - 1, shifted, i) for i in range(v)),
        Fraction(0),
    )


def _second_full(n: int, sizes: Sequence[int]) -> Fraction:
    mean = _mean_full(n, sizes)
    return mean * (1 + _mean_full(n - 1, [s - 1 for s in sizes]))


def expectation_full(inst: Instance) -> Fraction:
    """Mean of the number of elements common to all subsets: prod(m) / n^(T-1)."""
    return _mean_full(inst.n, inst.m)


def raw_moment_full(inst: Instance, v: int) -> Fraction:
    """``E(x_T^v)`` by the downward recursion on ``(n - 1, M - 1)``.

    E(x^v | n, M) = E(x | n, M) * sum_{i<v} C(v-1, i) E(x^i | n-1, M-1)
    """
    if v < 0:
        raise GHGDError(f"moment order must be >= 0, got {v}")
    n, sizes = inst.key()
    return _raw_full(n, sizes, v)


def central_moment_full(inst: Instance, v: int) -> Fraction:
    if v < 0:
        raise GHGDError(f"moment order must be >= 0, got {v}")
    mu = expectation_full(inst)
    return sum(
        (
            binomial(v, j) * (-1) ** (v - j) * raw_moment_full(inst, j) * mu ** (v - j)
            for j in range(v + 1)
        ),
        Fraction(0),
    )


def variance_full(inst: Instance) -> Fraction:
    """E * (1 + E(n-1, M-1) - E)."""
    mean = expectation_full(inst)
    shifted = _mean_full(inst.n - 1, [mi - 1 for mi in inst.m])
    return mean * (1 + shifted - mean)


# -- selections -------------------------------------------------------------


def extended_sizes(inst: Instance, indices: Iterable[int]) -> SubsetSelection:
    """Build the extended size list for the chosen subsets (0-based indices).

    >>> sel = extended_sizes(Instance(10, [3, 4, 5]), [0])
    >>> sel.values
    (3, 6, 5)
    """
    chosen = tuple(indices)
    if len(set(chosen)) != len(chosen):
        raise GHGDError(f"duplicate subset index in {chosen}")
    for i in chosen:
        if isinstance(i, bool) or not isinstance(i, int) or not 0 <= i < inst.T:
            raise GHGDError(f"subset index {i!r} out of range 0..{inst.T - 1}")
    picked = set(chosen)
    extended = tuple(
        SignedSize(i, DIRECT, mi) if i in picked else SignedSize(i, COMPLEMENT, inst.n - mi)
        for i, mi in enumerate(inst.m)
    )
    return SubsetSelection(inst, tuple(sorted(chosen)), extended)


def selections(inst: Instance, t: int) -> List[SubsetSelection]:
    return [extended_sizes(inst, c) for c in combinations(range(inst.T), t)]


def _check_t(inst: Instance, t: int) -> None:
    if isinstance(t, bool) or not isinstance(t, int) or not 0 <= t <= inst.T:
        raise GHGDError(f"t must be in 0..{inst.T}, got {t!r}")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise GHGDError(f"mode must be one of {MODES}, got {mode!r}")


# -- means --------------------------------------------------------------------


def expectation_exact_t(inst: Instance, t: int) -> Fraction:
    _check_t(inst, t)
    return sum((_mean_full(inst.n, s.values) for s in selections(inst, t)), Fraction(0))


def expectation_equal_m(n: int, m: int, T: int, t: int) -> Fraction:
    """Mean of ``x_t`` when every subset has the same size ``m``."""
    if not 0 <= m <= n:
        raise GHGDError(f"m = {m} is outside [0, n={n}]")
    if not 0 <= t <= T:
        raise GHGDError(f"t must be in 0..{T}, got {t}")
    return Fraction(binomial(T, t) * (n - m) ** (T - t) * m**t, n ** (T - 1))


def expectation_at_least_t(inst: Instance, t: int) -> Fraction:
    _check_t(inst, t)
    return sum((expectation_exact_t(inst, i) for i in range(t, inst.T + 1)), Fraction(0))


# -- second moments -----------------------------------------------------------


def same_partition(a: SubsetSelection, b: SubsetSelection) -> SamePartition:
    if a.instance != b.instance:
        raise GHGDError("selections belong to different instances")
    shared = set(b.extended)
    same = tuple(s for s in a.extended if s in shared)
    no_same = tuple(s for s in a.extended if s not in shared)
    return SamePartition(same, no_same)


def cross_moment(inst: Instance, a: SubsetSelection, b: SubsetSelection) -> Fraction:
    """``E(x_a * x_b)`` for two different selections.

    Entries where both selections agree contribute ``v (v - 1)``; entries where
    they disagree contribute ``v (n - v)``.
    """
    if a.instance != inst or b.instance != inst:
        raise GHGDError("selections belong to a different instance")
    if a.indices == b.indices:
        raise GHGDError("identical selections: use the diagonal second moment")
    n = inst.n
    part = same_partition(a, b)
    numerator = math.prod(s.value * (n - s.value) for s in part.no_same) * math.prod(
        s.value * (s.value - 1) for s in part.same
    )
    if numerator == 0:
        # also covers n == 1, where the denominator vanishes
        return Fraction(0)
    return Fraction(numerator, CROSS_DENOMINATORS[CROSS_MOMENT_DENOMINATOR](n, inst.T))


def _pair_sum(inst: Instance, sels: Sequence[SubsetSelection]) -> Fraction:
    total = Fraction(0)
    for i, a in enumerate(sels):
        total += _second_full(inst.n, a.values)
        for b in sels[i + 1 :]:
            total += 2 * cross_moment(inst, a, b)
    return total


def second_moment_exact_t(inst: Instance, t: int) -> Fraction:
    _check_t(inst, t)
    return _pair_sum(inst, selections(inst, t))


def variance_exact_t(inst: Instance, t: int) -> Fraction:
    return second_moment_exact_t(inst, t) - expectation_exact_t(inst, t) ** 2


def second_moment_at_least_t(inst: Instance, t: int) -> Fraction:
    _check_t(inst, t)
    sels = [s for size in range(t, inst.T + 1) for s in selections(inst, size)]
    return _pair_sum(inst, sels)


def variance_at_least_t(inst: Instance, t: int) -> Fraction:
    return second_moment_at_least_t(inst, t) - expectation_at_least_t(inst, t) ** 2


# -- dispatch -------------------------------------------------------------------


def mean_for(inst: Instance, t: int, mode: str) -> Fraction:
    _check_mode(mode)
    if mode == EXACT_T:
        return expectation_exact_t(inst, t)
    return expectation_at_least_t(inst, t)


def variance_for(inst: Instance, t: int, mode: str) -> Fraction:
    _check_mode(mode)
    if mode == EXACT_T:
        return variance_exact_t(inst, t)
    return variance_at_least_t(inst, t)


def moment_report(inst: Instance, t: int, mode: str = EXACT_T, v: Optional[int] = None) -> MomentReport:
    """Mean, second moment and variance of ``x_t`` / ``x_{>=t}``.

    With ``v`` given and ``t == T`` the raw and central moments of orders
    ``0..v`` are included as well.  Higher moments are only available for the
    full-overlap variable.
    """
    _check_t(inst, t)
    _check_mode(mode)
    if mode == EXACT_T:
        mean, second = expectation_exact_t(inst, t), second_moment_exact_t(inst, t)
    else:
        mean, second = expectation_at_least_t(inst, t), second_moment_at_least_t(inst, t)
    raw: Tuple[Fraction, ...] = ()
    central: Tuple[Fraction, ...] = ()
    if v is not None:
        if v < 0:
            raise GHGDError(f"moment order must be >= 0, got {v}")
        if t != inst.T and v > 2:
            raise GHGDError("moments above order 2 are only available for t == T")
        if t == inst.T:
            raw = tuple(raw_moment_full(inst, j) for j in range(v + 1))
            central = tuple(central_moment_full(inst, j) for j in range(v + 1))
    return MomentReport(t, mode, mean, second, second - mean**2, raw, central)
