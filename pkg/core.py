"""Series operations shared by every estimator.

Thresholds, exceedances, upcrossings, interexceedance times and the
block-maxima cycle transform. All functions are pure; positions are 0-based.
"""

import math

import numpy as np

from errors import DomainError
from models import CycleSeries, ExceedanceSummary, LevelSpec


def as_series(values):
    """Validate a finite, nonempty real sequence and return it as a float array"""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size == 0:
        raise DomainError('Series must contain at least one value')
    if not np.all(np.isfinite(x)):
        raise DomainError('Series values must be finite (no NaN or infinities)')
    return x


def derive_rng(seed, *stream):
    """
    Counter-based generator for the stream (seed, *stream).

    Replicate r of a study draws from derive_rng(master_seed, r), so results
    do not depend on the order in which replicates run.
    """
    keys = [int(seed)] + [int(s) for s in stream]
    if any(key < 0 for key in keys):
        raise DomainError('Seeds and stream keys must be nonnegative integers')
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(keys)))


def _order_index(n, p):
    # 1-based rank ceil(n p); rounding absorbs representation error in n * p
    return max(1, math.ceil(round(n * p, 9)))


def empirical_quantile(series, p):
    """Order statistic X_(ceil(n p)) of the sample"""
    x = as_series(series)
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f'Quantile probability must lie in (0, 1), got {p}')
    rank = _order_index(x.size, p)
    return float(np.partition(x, rank - 1)[rank - 1])


def resolve_level(series, spec):
    """Turn a LevelSpec into an absolute threshold for this series"""
    if spec.kind == LevelSpec.ABSOLUTE:
        return spec.value
    if spec.kind == LevelSpec.QUANTILE:
        return empirical_quantile(series, spec.value)
    x = as_series(series)
    if spec.value >= x.size:
        raise DomainError(f'Normalized level needs tau < n (tau={spec.value:g}, n={x.size})')
    return empirical_quantile(x, 1.0 - spec.value / x.size)


def exceedance_summary(series, level):
    x = as_series(series)
    indices = np.flatnonzero(x > level)
    return ExceedanceSummary(level=float(level), indices=indices, interexceedance_times=np.diff(indices))


def upcrossing_count(series, level):
    """Number of i with X_i <= level < X_{i+1}"""
    x = as_series(series)
    return int(np.count_nonzero((x[:-1] <= level) & (x[1:] > level)))


def block_cycles(series, k):
    """
    Maxima of the floor(n / (k - 1)) disjoint consecutive blocks of length k - 1.

    A trailing partial block is discarded.
    """
    x = as_series(series)
    k = int(k)
    if k < 2:
        raise DomainError(f'Cycle order k must be at least 2, got {k}')
    width = k - 1
    m = x.size // width
    if m == 0:
        raise DomainError(f'Series of length {x.size} is shorter than one block of length {width}')
    values = x[:m * width].reshape(m, width).max(axis=1)
    return CycleSeries(values=values, k=k)


def exceedance_counts(indicator):
    """Prefix sums C with C[b + 1] - C[a] = exceedances in positions a..b"""
    return np.concatenate(([0], np.cumsum(indicator, dtype=np.int64)))
