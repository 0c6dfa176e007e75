import click
import pandas as pd

from commands import reports_errors, write_output
from core import block_cycles
from errors import ConfigurationError
from estimators import estimate as estimate_theta
from harness import application_report, report_frame
from models import EstimatorId, LevelSpec
from utils import ingest_prices, load_series

ESTIMATE_COLUMNS = ['estimator', 'k', 'level', 'n_exceedances', 'value', 'raw']


def level_spec(quantile, tau, level):
    given = [v is not None for v in (quantile, tau, level)]
    if sum(given) > 1:
        raise ConfigurationError('Give only one of --quantile, --tau and --level')
    if tau is not None:
        return LevelSpec.normalized(tau)
    if level is not None:
        return LevelSpec.absolute(level)
    return LevelSpec.quantile(0.95 if quantile is None else quantile)


def read_input(file_path, prices):
    return ingest_prices(file_path) if prices else load_series(file_path)


level_options = [
    click.option('--quantile', '-q', type=float, default=None, help='Level as a quantile probability (default 0.95).'),
    click.option('--tau', type=float, default=None, help='Normalized level: the 1 - tau/n quantile.'),
    click.option('--level', type=float, default=None, help='Absolute level.'),
]


def with_level_options(f):
    for option in reversed(level_options):
        f = option(f)
    return f


@click.command()
@click.argument('file_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--estimator', '-e', 'estimators', multiple=True, default=['FDIR'], show_default=True,
              help='Estimator id, repeatable.')
@click.option('--k', type=int, default=None, help='Cycle order for the indirect estimators.')
@with_level_options
@click.option('--run', type=int, default=None, help='Run length of RUNS (default k).')
@click.option('--upper-fraction', type=float, default=None, help='Tail fraction of FINDTDC.')
@click.option('--prices', is_flag=True, help='Input holds prices; estimate on their log-returns.')
@click.pass_context
@reports_errors
def estimate(ctx, file_path, estimators, k, quantile, tau, level, run, upper_fraction, prices):
    """Estimate the extremal index of the series in FILE_PATH."""
    settings = ctx.obj['settings']
    x = read_input(file_path, prices)
    spec = level_spec(quantile, tau, level)
    fraction = settings.TDC_FRACTION if upper_fraction is None else upper_fraction

    records = []
    for name in estimators:
        result = estimate_theta(x, EstimatorId.parse(name), spec, k=k, run=run, upper_fraction=fraction)
        records.append([result.estimator_id.value, result.k, result.level, result.n_exceedances,
                        result.value, result.raw])
    write_output(pd.DataFrame(records, columns=ESTIMATE_COLUMNS))


@click.command()
@click.argument('file_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--k', type=int, required=True, help='Cycle order; blocks have length k - 1.')
@click.option('--prices', is_flag=True, help='Input holds prices; build cycles of their log-returns.')
@reports_errors
def cycles(file_path, k, prices):
    """Print the cycle series (maxima of disjoint blocks of length k - 1)."""
    result = block_cycles(read_input(file_path, prices), k)
    write_output(pd.DataFrame({'value': result.values}))


@click.command()
@click.argument('file_path', type=click.Path(exists=True, dir_okay=False))
@reports_errors
def ingest(file_path):
    """Turn a price file into log-returns, dropping repeated prices first."""
    write_output(pd.DataFrame({'log_return': ingest_prices(file_path)}))


@click.command()
@click.argument('file_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--k', type=int, default=5, show_default=True, help='Cycle order.')
@click.option('--quantile', '-q', type=float, default=0.95, show_default=True, help='Level quantile.')
@click.option('--prices', is_flag=True, help='Input holds prices; report on their log-returns.')
@click.pass_context
@reports_errors
def report(ctx, file_path, k, quantile, prices):
    """Every estimator on one series at a single quantile."""
    rows = application_report(read_input(file_path, prices), k, quantile,
                              upper_fraction=ctx.obj['settings'].TDC_FRACTION)
    write_output(report_frame(rows))
