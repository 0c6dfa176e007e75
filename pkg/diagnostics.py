"""
Empirical checks of the local dependence condition D(k).

For a level u (the empirical 1 - tau/n quantile) and window r_n = n // k_n
with k_n = floor((log n) ** s), the anti-D(k) proportion p_k counts
exceedances X_j > u followed by k - 1 non-exceedances and then a further
exceedance before position j + r_n - 1, relative to the total number of
exceedances. d_k counts exceedances followed by k - 1 non-exceedances.
"""

import logging
import math

import numpy as np
from joblib import Parallel, delayed

from core import as_series, block_cycles, exceedance_counts, resolve_level
from errors import DomainError, ExtremalError, NoExceedancesError, WindowError
from models import DiagnosticPoint, KSelectionReport, KSelectionRow, LevelSpec

logger = logging.getLogger(__name__)

STATISTICS = ('p_k', 'd_k')
DEFAULT_GAP_THRESHOLD = 0.05
DEFAULT_GRID_POINTS = 20
MIN_GRID_START = 500


def kn_value(n, s):
    """k_n = floor((log n) ** s), natural log"""
    n = int(n)
    if n < 3:
        raise DomainError(f'k_n needs n >= 3, got {n}')
    if not s > 0:
        raise DomainError(f'Exponent s must be positive, got {s}')
    k_n = math.floor(math.log(n) ** s)
    if k_n < 1:
        raise DomainError(f'k_n is 0 for n={n}, s={s}')
    return k_n


def rn_value(n, s):
    """Window length r_n = floor(n / k_n)"""
    return int(n) // kn_value(n, s)


def _window(x, k, tau, s):
    level = resolve_level(x, LevelSpec.normalized(tau))
    r = rn_value(x.size, s)
    if r < k:
        raise WindowError(f'Window r_n={r} is shorter than k={k} (n={x.size}, s={s})')
    return level, r


def _run_starts(x, level, k, r):
    # positions j = 0..n-r with X_j > u and no exceedance in j+1..j+k-1
    exceed = x > level
    counts = exceedance_counts(exceed)
    j = np.arange(x.size - r + 1)
    quiet = counts[j + k] - counts[j + 1] == 0
    return exceed[j] & quiet, counts, j


def _anti_proportion(x, k, tau, s):
    level, r = _window(x, k, tau, s)
    total = int(np.count_nonzero(x > level))
    if total == 0:
        raise NoExceedancesError(level)
    starts, counts, j = _run_starts(x, level, k, r)
    later = counts[j + r] - counts[j + k] > 0
    return np.count_nonzero(starts & later) / total, r


def anti_dk_proportion(series, k, tau, s):
    """Proportion p_k(u_n, r_n) of anti-D(k) events, k >= 2"""
    k = int(k)
    if k < 2:
        raise DomainError(f'anti-D(k) proportion needs k >= 2, got {k}; use anti_d1_proportion')
    return _anti_proportion(as_series(series), k, tau, s)[0]


def anti_d1_proportion(series, tau, s):
    """Proportion p_1(u_n, r_n): an exceedance followed by another within the window"""
    return _anti_proportion(as_series(series), 1, tau, s)[0]


def dk_count(series, k, tau, s):
    """d_k(u_n, r_n): exceedances at j <= n - r_n followed by k - 1 non-exceedances"""
    k = int(k)
    if k < 1:
        raise DomainError(f'd_k needs k >= 1, got {k}')
    x = as_series(series)
    level, r = _window(x, k, tau, s)
    if not np.any(x > level):
        raise NoExceedancesError(level)
    starts, _, _ = _run_starts(x, level, k, r)
    return int(np.count_nonzero(starts))


def _point(x, m, k, tau, s, statistic):
    prefix = x[:m]
    try:
        r = rn_value(m, s)
    except DomainError:
        r = None
    try:
        if statistic == 'd_k':
            value = float(dk_count(prefix, k, tau, s))
        else:
            value = _anti_proportion(prefix, k, tau, s)[0]
    except ExtremalError as exc:
        logger.debug('Missing diagnostic point m=%d k=%d: %s', m, k, exc)
        value = None
    return DiagnosticPoint(m=int(m), k=int(k), tau=float(tau), s=float(s), r=r, statistic=statistic, value=value)


def default_grid(n, k, tau, s, points=DEFAULT_GRID_POINTS):
    """Logarithmically spaced prefix lengths from max(500, first feasible m) to n"""
    n = int(n)

    def feasible(m):
        try:
            return m > tau and rn_value(m, s) >= k
        except DomainError:
            return False

    start = min(MIN_GRID_START, n)
    while start < n and not feasible(start):
        start = min(n, start * 2)
    if start >= n:
        return [n]
    grid = np.unique(np.round(np.geomspace(start, n, points)).astype(int))
    return [int(m) for m in grid]


def trajectory(series, k, tau, s, grid=None, statistic='p_k', n_jobs=1):
    """
    Evaluate p_k (or d_k) on growing prefixes X_1..X_m, one point per grid entry.

    The level and window are recomputed for every prefix; prefixes where the
    statistic is undefined are returned as points with value None.
    """
    x = as_series(series)
    if statistic not in STATISTICS:
        raise DomainError(f'statistic must be one of {STATISTICS}, got {statistic!r}')
    if grid is None:
        grid = default_grid(x.size, k, tau, s)
    grid = [int(m) for m in grid]
    if not grid:
        raise DomainError('Trajectory grid is empty')
    if any(m < 1 or m > x.size for m in grid):
        raise DomainError(f'Grid values must lie in 1..{x.size}')
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError('Grid must be strictly increasing')
    if int(k) < 1:
        raise DomainError(f'k must be at least 1, got {k}')
    return Parallel(n_jobs=n_jobs)(delayed(_point)(x, m, int(k), tau, s, statistic) for m in grid)


def cycle_trajectory(series, k, tau, s, grid=None, n_jobs=1):
    """Anti-D(2) proportions of the cycle series of order k over growing prefixes"""
    cycles = block_cycles(series, k)
    return trajectory(cycles.values, 2, tau, s, grid=grid, n_jobs=n_jobs)


def k_selection_report(series, k_max, tau, s, threshold=DEFAULT_GAP_THRESHOLD):
    """
    Terminal d_k and p_k for k = 1..k_max with the relative gaps (d_{k-1} - d_k) / d_1.

    The recommended k is the smallest whose forward gap (d_k - d_{k+1}) / d_1
    falls below threshold. This is a heuristic and the report says so.
    """
    k_max = int(k_max)
    if k_max < 2:
        raise DomainError(f'k_max must be at least 2, got {k_max}')
    x = as_series(series)
    counts = [dk_count(x, k, tau, s) for k in range(1, k_max + 2)]
    d_1 = counts[0]
    if d_1 == 0:
        raise NoExceedancesError()

    rows = []
    recommended = None
    for k in range(1, k_max + 1):
        p_k = anti_d1_proportion(x, tau, s) if k == 1 else anti_dk_proportion(x, k, tau, s)
        gap = None if k == 1 else (counts[k - 2] - counts[k - 1]) / d_1
        forward_gap = (counts[k - 1] - counts[k]) / d_1
        rows.append(KSelectionRow(k=k, d_k=counts[k - 1], p_k=p_k, gap=gap, forward_gap=forward_gap))
        if recommended is None and forward_gap < threshold:
            recommended = k
    logger.info('k selection (tau=%g, s=%g): recommended k=%s', tau, s, recommended)
    return KSelectionReport(rows=rows, recommended_k=recommended, threshold=threshold, tau=tau, s=s)
