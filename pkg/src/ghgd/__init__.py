"""Exact statistics for overlaps among T random subsets of a finite population."""

from .combinatorics import (
    AT_LEAST_T,
    EXACT_T,
    DistributionTable,
    GHGDError,
    Instance,
    binomial,
    count_full_overlap,
    pmf_full_overlap,
    total_configurations,
)
from .moments import (
    cross_moment,
    expectation_at_least_t,
    expectation_equal_m,
    expectation_exact_t,
    expectation_full,
    extended_sizes,
    moment_report,
    raw_moment_full,
    central_moment_full,
    same_partition,
    second_moment_at_least_t,
    second_moment_exact_t,
    variance_at_least_t,
    variance_exact_t,
    variance_full,
)
from .oracle import EnumerationBudgetExceeded, enumerate_distribution, simulate
from .bounds import (
    chebyshev_p_at_least_one,
    max_mean_for_alpha,
    mean_variance_gap,
    overlap_significance,
)

__version__ = "0.1.0"
