"""
Extremal index estimators.

Direct estimators (runs, intervals, upcrossings, maximum likelihood) work on
the observed series at a level u. Indirect estimators first reduce the series
to its cycle series Z of block maxima of length k - 1 and map the estimate of
theta_Z back to theta_X through the exceedance counts N^Z(u) / N^X(u).
Every estimate keeps its raw value; ThetaEstimate.value is clipped to [0, 1].
"""

import math

import numpy as np
from scipy.stats import rankdata

from core import (as_series, block_cycles, exceedance_counts, exceedance_summary,
                  resolve_level, upcrossing_count)
from errors import DegenerateError, DomainError, InsufficientDataError, InsufficientExceedancesError, NoExceedancesError
from models import FIND_BASES, EstimatorId, LevelSpec, ThetaEstimate

DEFAULT_UPPER_FRACTION = 0.05


def _exceedances(x, level, required=1):
    summary = exceedance_summary(x, level)
    if summary.count == 0:
        raise NoExceedancesError(level)
    if summary.count < required:
        raise InsufficientExceedancesError(summary.count, required)
    return summary


def runs_estimator(series, level, run):
    """
    Fraction of exceedances followed by run - 1 non-exceedances.

    Windows that run past the end of the series only look at the available
    values.
    """
    x = as_series(series)
    run = int(run)
    if run < 1:
        raise DomainError(f'Run parameter must be at least 1, got {run}')
    summary = _exceedances(x, level)
    counts = exceedance_counts(x > level)
    starts = summary.indices
    ends = np.minimum(starts + run - 1, x.size - 1)
    later = counts[ends + 1] - counts[starts + 1]
    raw = np.count_nonzero(later == 0) / summary.count
    return ThetaEstimate(EstimatorId.RUNS, raw, level=float(level), n_exceedances=summary.count)


def upcrossings_estimator(series, level):
    x = as_series(series)
    summary = _exceedances(x, level)
    raw = upcrossing_count(x, level) / summary.count
    return ThetaEstimate(EstimatorId.UPCROSS, raw, level=float(level), n_exceedances=summary.count)


def intervals_estimator(series, level):
    """Two-branch moment estimator built from interexceedance times"""
    x = as_series(series)
    summary = _exceedances(x, level, required=2)
    t = summary.interexceedance_times.astype(float)
    n_gaps = t.size
    if t.max() <= 2:
        numerator = 2.0 * t.sum() ** 2
        denominator = n_gaps * np.sum(t ** 2)
    else:
        numerator = 2.0 * np.sum(t - 1.0) ** 2
        denominator = n_gaps * np.sum((t - 1.0) * (t - 2.0))
    if denominator == 0:
        raise DegenerateError('Interexceedance times give a zero denominator')
    return ThetaEstimate(EstimatorId.INTERVALS, numerator / denominator,
                         level=float(level), n_exceedances=summary.count)


def ml_estimator(series, level):
    """Closed-form maximum likelihood estimator on the gaps S_i = T_i - 1"""
    x = as_series(series)
    summary = _exceedances(x, level, required=2)
    q = summary.count / x.size
    gaps = summary.interexceedance_times - 1
    scaled = q * float(gaps.sum())
    if scaled == 0:
        raw = 0.0
    else:
        n_clusters = np.count_nonzero(gaps)
        b = scaled + (summary.count - 1) + n_clusters
        raw = (b - math.sqrt(b * b - 8.0 * n_clusters * scaled)) / (2.0 * scaled)
    return ThetaEstimate(EstimatorId.ML, raw, level=float(level), n_exceedances=summary.count)


def tdc_estimator(cycles, upper_fraction=DEFAULT_UPPER_FRACTION):
    """
    Empirical upper tail dependence coefficient of consecutive cycle pairs.

    Both coordinates of (Z_i, Z_{i+1}) are ranked (ties by first occurrence);
    lambda is the share of the top j = ceil(upper_fraction * (m - 1)) ranks of
    the first coordinate that also sit in the top j of the second.
    """
    z = as_series(cycles.values)
    if z.size < 3:
        raise InsufficientDataError(f'Tail dependence needs at least 3 cycles, got {z.size}')
    if not 0.0 < upper_fraction < 1.0:
        raise DomainError(f'upper_fraction must lie in (0, 1), got {upper_fraction}')
    pairs = z.size - 1
    j = max(1, math.ceil(round(upper_fraction * pairs, 9)))
    first = rankdata(z[:-1], method='ordinal')
    second = rankdata(z[1:], method='ordinal')
    cutoff = pairs - j
    joint = np.count_nonzero((first > cutoff) & (second > cutoff))
    return min(1.0, max(0.0, joint / j))


def ff_theta(cycles):
    """theta_Z = 1 / (1 - E(F(Z_1) v F(Z_2))) - 2 with F the rank df scaled by m + 1"""
    z = as_series(cycles.values)
    m = z.size
    if m < 3:
        raise InsufficientDataError(f'Moment estimator needs at least 3 cycles, got {m}')
    df = rankdata(z, method='max') / (m + 1.0)
    mean_max = float(np.mean(np.maximum(df[:-1], df[1:])))
    if mean_max >= 1.0:
        raise DegenerateError('Mean of consecutive cycle maxima reached 1')
    return ThetaEstimate(EstimatorId.FF, 1.0 / (1.0 - mean_max) - 2.0, k=cycles.k)


def to_unit_frechet(series):
    """Rank transform to unit Frechet margins: x -> -1 / log(rank / (n + 1))"""
    x = as_series(series)
    if x.size < 2:
        raise DomainError('Unit Frechet transform needs at least 2 values')
    ranks = rankdata(x, method='ordinal')
    return -1.0 / np.log(ranks / (x.size + 1.0))


def extremal_coefficient(cycles):
    """-log of the empirical df of the cycles at 1 (unit Frechet series only)"""
    z = as_series(cycles.values)
    at_one = np.count_nonzero(z <= 1.0) / z.size
    if at_one == 0:
        raise DegenerateError('No cycle is at most 1; empirical F_Z(1) is 0')
    return -math.log(at_one)


def ffstar_theta(series, k):
    """theta_X = theta_Z * (-log F_Z(1)) / (k - 1) for a unit Frechet series"""
    k = int(k)
    if k < 3:
        raise DomainError(f'FF* needs k >= 3, got {k}')
    cycles = block_cycles(series, k)
    theta_z = ff_theta(cycles).value
    raw = theta_z * extremal_coefficient(cycles) / (k - 1)
    return ThetaEstimate(EstimatorId.FFSTAR, raw, k=k)


def max_stable_theta(series):
    """theta = 1 / (1 - E(exp(-1 / (X_1 v X_2)))) - 2 for unit Frechet margins"""
    x = as_series(series)
    if x.size < 2 or np.any(x <= 0):
        raise DomainError('Needs at least 2 positive (unit Frechet) values')
    mean_df = float(np.mean(np.exp(-1.0 / np.maximum(x[:-1], x[1:]))))
    if mean_df >= 1.0:
        raise DegenerateError('Mean of consecutive maxima reached 1')
    return ThetaEstimate(EstimatorId.FF, 1.0 / (1.0 - mean_df) - 2.0, k=2)


def _cycle_counts(series, k, spec):
    x = as_series(series)
    level = resolve_level(x, spec)
    cycles = block_cycles(x, k)
    n_x = exceedance_summary(x, level).count
    if n_x == 0:
        raise NoExceedancesError(level)
    return x, level, cycles, n_x


def fdir(series, k, spec):
    """theta_X = U^Z(u) / N^X(u)"""
    _, level, cycles, n_x = _cycle_counts(series, k, spec)
    raw = upcrossing_count(cycles.values, level) / n_x
    return ThetaEstimate(EstimatorId.FDIR, raw, k=cycles.k, level=level, n_exceedances=n_x)


def find(series, k, spec, base=EstimatorId.UPCROSS):
    """theta_X = theta_Z * N^Z(u) / N^X(u) with theta_Z from the chosen base estimator"""
    base = EstimatorId.parse(base)
    if base not in FIND_BASES:
        raise DomainError(f'Base estimator must be one of {[b.value for b in FIND_BASES]}, got {base.value}')
    _, level, cycles, n_x = _cycle_counts(series, k, spec)
    n_z = exceedance_summary(cycles.values, level).count
    if base == EstimatorId.UPCROSS or n_z == 0:
        # U^Z / N^Z * N^Z is U^Z; 0 when only the discarded tail exceeds
        raw = upcrossing_count(cycles.values, level) / n_x
    else:
        if base == EstimatorId.INTERVALS:
            theta_z = intervals_estimator(cycles.values, level)
        elif base == EstimatorId.ML:
            theta_z = ml_estimator(cycles.values, level)
        else:
            theta_z = ff_theta(cycles)
        raw = theta_z.value * n_z / n_x
    return ThetaEstimate(FIND_BASES[base], raw, k=cycles.k, level=level, n_exceedances=n_x)


def findtdc(series, k, spec, upper_fraction=DEFAULT_UPPER_FRACTION):
    """theta_X = (1 - lambda_Z) * N^Z(u) / N^X(u)"""
    _, level, cycles, n_x = _cycle_counts(series, k, spec)
    tail_dependence = tdc_estimator(cycles, upper_fraction)
    n_z = exceedance_summary(cycles.values, level).count
    raw = (1.0 - tail_dependence) * n_z / n_x
    return ThetaEstimate(EstimatorId.FINDTDC, raw, k=cycles.k, level=level, n_exceedances=n_x)


def estimate(series, estimator, spec, k=None, run=None, upper_fraction=DEFAULT_UPPER_FRACTION):
    """
    Evaluate one estimator by id.

    Direct estimators use the level resolved from spec; RUNS uses run
    (default k). FF returns the extremal index of the (k - 1)-block cycle
    series, not of the series itself; FIND_FF rescales it to the series.
    FFSTAR rank-transforms the series to unit Frechet margins before
    building cycles.
    """
    estimator = EstimatorId.parse(estimator)
    if estimator.is_indirect and k is None:
        raise DomainError(f'{estimator.value} needs a cycle order k')
    x = as_series(series)

    if estimator == EstimatorId.FDIR:
        return fdir(x, k, spec)
    if estimator in FIND_BASES.values():
        base = next(b for b, found in FIND_BASES.items() if found == estimator)
        return find(x, k, spec, base)
    if estimator == EstimatorId.FINDTDC:
        return findtdc(x, k, spec, upper_fraction)
    if estimator == EstimatorId.FF:
        return ff_theta(block_cycles(x, k))
    if estimator == EstimatorId.FFSTAR:
        return ffstar_theta(to_unit_frechet(x), k)

    level = resolve_level(x, spec if spec is not None else LevelSpec.quantile(0.95))
    if estimator == EstimatorId.RUNS:
        run = run if run is not None else k
        if run is None:
            raise DomainError('RUNS needs a run parameter (or k)')
        return runs_estimator(x, level, run)
    if estimator == EstimatorId.INTERVALS:
        return intervals_estimator(x, level)
    if estimator == EstimatorId.ML:
        return ml_estimator(x, level)
    return upcrossings_estimator(x, level)
