"""
Monte-Carlo study runner and the single-series application report.

A study simulates `replicates` independent series from the model (replicate
r draws from stream (master_seed, r)), evaluates every configured estimator
at every quantile and summarises the errors against the reference theta.
"""

import logging
import math
from dataclasses import replace

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from core import as_series
from errors import ConfigurationError, DegenerateError, DomainError
from estimators import DEFAULT_UPPER_FRACTION, estimate
from models import EstimatorId, LevelSpec, ReportRow, StudyCell, StudyResult
from simulators import REFERENCE_TABLE, reference_entry, simulate

logger = logging.getLogger(__name__)

REPORT_ESTIMATORS = (
    EstimatorId.RUNS,
    EstimatorId.INTERVALS,
    EstimatorId.FDIR,
    EstimatorId.FIND_UPCROSS,
    EstimatorId.FIND_INTERVALS,
    EstimatorId.FIND_ML,
    EstimatorId.FIND_FF,
    EstimatorId.FINDTDC,
    EstimatorId.FFSTAR,
)

STUDY_COLUMNS = ['estimator', 'quantile', 'rmse', 'abias', 'mean', 'successes', 'failures']
REPORT_COLUMNS = ['estimator', 'k', 'value', 'raw', 'error']
TRAJECTORY_COLUMNS = ['m', 'k', 'tau', 's', 'r', 'statistic', 'value']
K_SELECTION_COLUMNS = ['k', 'd_k', 'p_k', 'gap', 'forward_gap']


def _cells(config):
    """(estimator, quantile) pairs in output order; level-free estimators get quantile None"""
    cells = []
    for estimator in config.estimators:
        if estimator.is_level_free:
            cells.append((estimator, None))
        else:
            cells.extend((estimator, q) for q in config.quantiles)
    return cells


def _evaluate(x, estimator, quantile, config):
    spec = None if quantile is None else LevelSpec.quantile(quantile)
    return estimate(x, estimator, spec, k=config.k, run=config.runs_parameter,
                    upper_fraction=config.upper_fraction)


def run_replicate(config, replicate):
    """Estimates of one replicate, in the order of _cells; None marks a failed estimator"""
    model = replace(config.model, seed=config.master_seed)
    x = simulate(model, config.n, stream=(replicate,))
    values = []
    for estimator, quantile in _cells(config):
        try:
            values.append(_evaluate(x, estimator, quantile, config).value)
        except DegenerateError as exc:
            logger.debug('Replicate %d: %s at q=%s failed: %s', replicate, estimator.value, quantile, exc)
            values.append(None)
    return values


def summarise(values, theta):
    """(rmse, abias, mean) over the successful values; NaN when there are none"""
    successes = np.array([v for v in values if v is not None], dtype=float)
    if successes.size == 0:
        return math.nan, math.nan, math.nan
    errors = successes - theta
    bias = float(np.mean(errors))
    variance = float(np.mean((errors - bias) ** 2))
    # rmse^2 = bias^2 + variance keeps rmse >= abias in floating point
    return math.sqrt(bias * bias + variance), abs(bias), float(np.mean(successes))


def run_study(config, reference_table=REFERENCE_TABLE):
    """
    Run the Monte-Carlo study described by config.

    Replicates run through joblib with config.n_jobs workers; results are
    collected in replicate order so sequential and parallel runs agree
    exactly. Estimators that hit a degenerate sample on a replicate are
    counted in the cell's failure_count and left out of its statistics;
    configuration and domain errors abort the study.
    """
    entry = reference_entry(config.model, reference_table)
    if entry is None:
        raise ConfigurationError(f'No reference theta for {config.model.model.value} '
                                 f'with parameters {dict(config.model.params)}')
    theta, provenance = entry
    logger.info('Study %s: n=%d replicates=%d k=%d, reference theta %.4g (%s)',
                config.model.model.value, config.n, config.replicates, config.k, theta, provenance)

    per_replicate = Parallel(n_jobs=config.n_jobs)(
        delayed(run_replicate)(config, r) for r in range(config.replicates))

    cells = []
    for column, (estimator, quantile) in enumerate(_cells(config)):
        values = [row[column] for row in per_replicate]
        rmse, abias, mean = summarise(values, theta)
        failures = sum(v is None for v in values)
        if failures:
            logger.info('%s at q=%s failed on %d of %d replicates',
                        estimator.value, quantile, failures, config.replicates)
        cells.append(StudyCell(estimator=estimator, quantile=quantile, rmse=rmse, abias=abias, mean=mean,
                               successes=config.replicates - failures, failure_count=failures))
    logger.info('Study %s finished', config.model.model.value)
    return StudyResult(config=config, reference_theta=theta, provenance=provenance, cells=cells)


def application_report(series, k, quantile, upper_fraction=DEFAULT_UPPER_FRACTION):
    """Every estimator on one observed series, cycles of order k, level at the given quantile"""
    x = as_series(series)
    k = int(k)
    if k < 3:
        # FF* is part of every report and needs k >= 3
        raise DomainError(f'The report needs a cycle order k of at least 3, got {k}')
    if x.size < k - 1:
        raise DomainError(f'Series of length {x.size} is shorter than one cycle block (k - 1 = {k - 1})')
    spec = LevelSpec.quantile(quantile)

    rows = []
    for estimator in REPORT_ESTIMATORS:
        try:
            result = estimate(x, estimator, None if estimator.is_level_free else spec,
                              k=k, run=k, upper_fraction=upper_fraction)
            rows.append(ReportRow(estimator=estimator, value=result.value, raw=result.raw, k=result.k))
        except DegenerateError as exc:
            logger.warning('%s failed: %s', estimator.value, exc)
            rows.append(ReportRow(estimator=estimator, value=None, raw=None,
                                  k=k if estimator.is_indirect else None, error=str(exc)))
    return rows


def study_frame(result):
    """Long format, one line per (estimator, quantile) cell"""
    records = [[c.estimator.value, c.quantile, c.rmse, c.abias, c.mean, c.successes, c.failure_count]
               for c in result.cells]
    return pd.DataFrame(records, columns=STUDY_COLUMNS)


def study_table(result):
    """Estimators as rows, rmse and abias per quantile as columns"""
    quantiles = list(result.config.quantiles)
    columns = ['estimator'] + [f'{metric} q{q:g}' for q in quantiles for metric in ('rmse', 'abias')]
    records = []
    for estimator in result.config.estimators:
        record = [estimator.value]
        for q in quantiles:
            cell = result.cell(estimator, q)
            record.extend([cell.rmse, cell.abias])
        records.append(record)
    return pd.DataFrame(records, columns=columns)


def report_frame(rows):
    records = [[row.estimator.value, row.k, row.value, row.raw, row.error] for row in rows]
    return pd.DataFrame(records, columns=REPORT_COLUMNS)


def trajectory_frame(points):
    records = [[p.m, p.k, p.tau, p.s, p.r, p.statistic, p.value] for p in points]
    return pd.DataFrame(records, columns=TRAJECTORY_COLUMNS)


def k_selection_frame(report):
    records = [[row.k, row.d_k, row.p_k, row.gap, row.forward_gap] for row in report.rows]
    return pd.DataFrame(records, columns=K_SELECTION_COLUMNS)
