import logging
import os

import click
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

FORMATS = ['csv', 'markdown']


def configure_logging(settings, verbose=False):
    level = logging.DEBUG if verbose else getattr(logging, str(settings.LOG_LEVEL).upper(), logging.INFO)
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level)


def create_cli(config_name=None):
    """Command line factory: loads settings, configures logging, registers commands"""
    if config_name is None:
        config_name = os.environ.get('EXTREMAL_ENV', 'development')

    from config import config
    settings = config[config_name]()
    configure_logging(settings)

    @click.group(context_settings={'help_option_names': ['-h', '--help']})
    @click.option('--seed', type=int, default=None, help='Seed of the random streams (default EXTREMAL_SEED).')
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
                  help='Study configuration file (JSON).')
    @click.option('--out', type=click.Path(dir_okay=False), default=None,
                  help='Write results to this file instead of stdout.')
    @click.option('--format', 'fmt', type=click.Choice(FORMATS), default='csv', show_default=True,
                  help='csv keeps full precision, markdown prints an aligned table.')
    @click.option('--verbose', '-v', is_flag=True, help='Log at DEBUG level.')
    @click.pass_context
    def cli(ctx, seed, config_path, out, fmt, verbose):
        """Extremal index estimation through the cycle transform."""
        configure_logging(settings, verbose)
        ctx.obj = {
            'settings': settings,
            'seed': settings.SEED if seed is None else seed,
            'seed_given': seed is not None,
            'config_path': config_path,
            'out': out,
            'format': fmt,
        }

    # Register command groups
    from commands.estimate import cycles, estimate, ingest, report
    from commands.simulate import mm_check, oracle, simulate
    from commands.diagnose import diagnose
    from commands.study import study

    for command in (simulate, estimate, cycles, diagnose, mm_check, study, ingest, report, oracle):
        cli.add_command(command)

    return cli
