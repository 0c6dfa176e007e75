import click
import pandas as pd

from commands import parse_params, reports_errors, write_output
from errors import ConfigurationError
from mm import (DEFAULT_SIGNATURE, mm_check_dk, mm_extremal_index, mm_min_k, parse_coefficient,
                signature_from_weights)
from models import ModelId, ModelSpec
from simulators import ORACLE_BLOCK, ORACLE_TAUS, oracle_theta, record_oracle, reference_theta
from simulators import simulate as simulate_model
from utils import load_signature


def read_signature(signature_path, weights):
    if signature_path and weights:
        raise ConfigurationError('Give either a signature file or --weights, not both')
    if signature_path:
        return load_signature(signature_path)
    if weights:
        return signature_from_weights([parse_coefficient(w) for w in weights.split(',')])
    return DEFAULT_SIGNATURE


@click.command()
@click.argument('model')
@click.option('-n', type=int, required=True, help='Number of observations.')
@click.option('--param', 'params', multiple=True, help='Model parameter KEY=VALUE, repeatable.')
@click.option('--burn-in', type=int, default=None, help='Discarded initial values (default EXTREMAL_BURN_IN).')
@click.option('--signature', 'signature_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='MM signature file ("l j alpha" rows).')
@click.option('--weights', default=None, help='Single-row MM signature, e.g. 2/6,1/6,3/6.')
@click.option('--stream', type=int, multiple=True, help='Stream key appended to the seed, repeatable.')
@click.pass_context
@reports_errors
def simulate(ctx, model, n, params, burn_in, signature_path, weights, stream):
    """Simulate N observations of MODEL (AR_CAUCHY, AR_UNIF, MAR, MARKOV_LOGISTIC, GARCH11, MM)."""
    settings = ctx.obj['settings']
    model = ModelId.parse(model)
    signature = read_signature(signature_path, weights) if model == ModelId.MM else None
    spec = ModelSpec(model=model, params=parse_params(params),
                     burn_in=settings.BURN_IN if burn_in is None else burn_in,
                     seed=ctx.obj['seed'], signature=signature)
    x = simulate_model(spec, n, stream=tuple(stream))
    write_output(pd.DataFrame({'value': x}))


@click.command('mm-check')
@click.argument('signature_path', type=click.Path(exists=True, dir_okay=False), required=False)
@click.option('--weights', default=None, help='Single-row signature, e.g. 2/6,1/6,3/6.')
@click.option('--k', 'orders', type=int, multiple=True, help='Cycle order to check, repeatable.')
@click.option('--k-max', type=int, default=None, help='Check every k up to k-max and report the smallest.')
@reports_errors
def mm_check(signature_path, weights, orders, k_max):
    """Check D(k) for a moving maxima signature and print its extremal index."""
    sig = read_signature(signature_path, weights)
    if not orders and k_max is None:
        k_max = sig.width + 1
    ks = list(orders) or list(range(1, k_max + 1))

    theta = mm_extremal_index(sig)
    records = []
    for k in ks:
        check = mm_check_dk(sig, k)
        l, j = check.witness if check.witness else (None, None)
        records.append([k, check.holds, l, j, theta])
    if k_max is not None:
        click.echo(f'smallest k with D(k): {mm_min_k(sig, k_max)}', err=True)
    frame = pd.DataFrame(records, columns=['k', 'holds', 'witness_l', 'witness_j', 'theta'])
    write_output(frame.astype({'witness_l': 'Int64', 'witness_j': 'Int64'}))


@click.command()
@click.argument('model')
@click.option('-n', type=int, default=10 ** 6, show_default=True, help='Length of the simulated series.')
@click.option('--param', 'params', multiple=True, help='Model parameter KEY=VALUE, repeatable.')
@click.option('--tau', 'taus', type=float, multiple=True, help=f'Normalized level, repeatable (default {ORACLE_TAUS}).')
@click.option('--block', type=int, default=ORACLE_BLOCK, show_default=True, help='Block length of the maxima.')
@click.option('--record', is_flag=True, help='Store the run with the model entry of the reference table.')
@click.pass_context
@reports_errors
def oracle(ctx, model, n, params, taus, block, record):
    """Brute-force block maxima theta of MODEL, for cross-checking the reference table."""
    settings = ctx.obj['settings']
    spec = ModelSpec(model=ModelId.parse(model), params=parse_params(params),
                     burn_in=settings.BURN_IN, seed=ctx.obj['seed'])
    estimates = oracle_theta(spec, n=n, taus=tuple(taus) or ORACLE_TAUS, block=block)
    reference = reference_theta(spec, settings.REFERENCE_TABLE)
    if reference is not None:
        click.echo(f'reference theta {reference:.4g}', err=True)
    if record:
        record_oracle(spec, estimates, n, block, spec.seed, table=settings.REFERENCE_TABLE)
    write_output(pd.DataFrame({'tau': list(estimates), 'theta': list(estimates.values())}))
