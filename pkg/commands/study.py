from dataclasses import replace

import click

from commands import reports_errors, write_output
from errors import ConfigurationError
from harness import run_study, study_frame, study_table
from utils import load_study_config


@click.command()
@click.argument('config_file', type=click.Path(exists=True, dir_okay=False), required=False)
@click.option('--replicates', type=int, default=None, help='Override the number of replicates.')
@click.option('--n-jobs', type=int, default=None, help='Parallel workers (default EXTREMAL_N_JOBS).')
@click.pass_context
@reports_errors
def study(ctx, config_file, replicates, n_jobs):
    """Run a Monte-Carlo study described by a JSON configuration file.

    A global --seed replaces the master_seed of the configuration.
    """
    settings = ctx.obj['settings']
    config_file = config_file or ctx.obj['config_path']
    if config_file is None:
        raise ConfigurationError('A study needs a configuration file (argument or --config)')

    config = load_study_config(config_file, n_jobs=settings.N_JOBS)
    overrides = {}
    if replicates is not None:
        overrides['replicates'] = replicates
    if n_jobs is not None:
        overrides['n_jobs'] = n_jobs
    if ctx.obj['seed_given']:
        overrides['master_seed'] = ctx.obj['seed']
        overrides['model'] = replace(config.model, seed=ctx.obj['seed'])
    if overrides:
        config = replace(config, **overrides)

    result = run_study(config, reference_table=settings.REFERENCE_TABLE)
    click.echo(f'reference theta {result.reference_theta:.4g}: {result.provenance}', err=True)
    if ctx.obj['format'] == 'markdown':
        write_output(study_table(result))
    else:
        write_output(study_frame(result))
