import logging
from functools import wraps

import click

from errors import ExtremalError
from utils import emit

logger = logging.getLogger(__name__)


def reports_errors(f):
    """Decorator mapping library errors to a message on stderr and the error's exit code"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ExtremalError as e:
            click.echo(f'Error: {e}', err=True)
            click.get_current_context().exit(e.exit_code)
    return decorated_function


def write_output(frame):
    """Emit the frame in the selected format to --out or stdout"""
    ctx = click.get_current_context()
    out, fmt = ctx.obj['out'], ctx.obj['format']
    text = emit(frame, out, fmt)
    if out is None:
        click.echo(text, nl=False)
    else:
        logger.info('Wrote %d rows to %s', len(frame), out)


def parse_params(values):
    """KEY=VALUE pairs from repeated --param options"""
    params = {}
    for item in values:
        key, sep, value = item.partition('=')
        if not sep:
            raise click.BadParameter(f'expected KEY=VALUE, got {item!r}', param_hint='--param')
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise click.BadParameter(f'{key} must be a number, got {value!r}', param_hint='--param')
    return params
