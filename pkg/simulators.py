"""
Seeded generators for the study models.

    AR_CAUCHY        X_t = rho X_{t-1} + e_t, e standard Cauchy
    AR_UNIF          X_t = -X_{t-1} / r + e_t, e uniform on {1/r, 2/r, ..., 1}
    MAR              X_t = max(phi X_{t-1}, (1 - phi) e_t), e unit Frechet
    MARKOV_LOGISTIC  Gumbel margins, logistic copula between consecutive values
    GARCH11          X_t = sigma_t eta_t, sigma_t^2 = omega + lambda X_{t-1}^2 + beta sigma_{t-1}^2
    MM               finite moving maxima, see mm.mm_simulate

Every recursive model starts from its stationary law where that is known and
discards burn_in values before the n returned ones.
"""

import json
import logging
import math
import os
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.signal import lfilter

from core import as_series, derive_rng, empirical_quantile
from errors import ConfigurationError, DegenerateError, DomainError
from mm import DEFAULT_SIGNATURE, mm_extremal_index, mm_simulate
from models import ModelId, ModelSpec

logger = logging.getLogger(__name__)

BASE_DIR = os.path.abspath(os.path.dirname(__file__))
REFERENCE_TABLE = os.path.join(BASE_DIR, 'data', 'reference_theta.json')

DEFAULT_PARAMS = {
    ModelId.AR_CAUCHY: {'rho': -0.6},
    ModelId.AR_UNIF: {'r': 2},
    ModelId.MAR: {'phi': 0.5},
    ModelId.MARKOV_LOGISTIC: {'alpha': 0.5},
    ModelId.GARCH11: {'lambda': 0.25, 'beta': 0.7},
    ModelId.MM: {},
}

LOGISTIC_XTOL = 1e-10
TINY = np.finfo(float).tiny
ORACLE_TAUS = (1.0, 2.0, 3.0)
ORACLE_BLOCK = 1000
ORACLE_AGREEMENT = 0.02


def model_params(spec):
    """Parameters of the spec completed with the model defaults"""
    params = dict(DEFAULT_PARAMS[spec.model])
    params.update(spec.params or {})
    unknown = set(params) - set(DEFAULT_PARAMS[spec.model])
    if unknown:
        raise DomainError(f'Unknown parameters for {spec.model.value}: {sorted(unknown)}')
    return params


def validate_params(spec):
    params = model_params(spec)
    model = spec.model
    if model == ModelId.AR_CAUCHY and not abs(params['rho']) < 1:
        raise DomainError(f'AR_CAUCHY needs |rho| < 1, got {params["rho"]}')
    if model == ModelId.AR_UNIF:
        r = params['r']
        if int(r) != r or r < 2:
            raise DomainError(f'AR_UNIF needs an integer r >= 2, got {r}')
    if model == ModelId.MAR and not 0 < params['phi'] < 1:
        raise DomainError(f'MAR needs 0 < phi < 1, got {params["phi"]}')
    if model == ModelId.MARKOV_LOGISTIC and not 0 < params['alpha'] < 1:
        raise DomainError(f'MARKOV_LOGISTIC needs 0 < alpha < 1, got {params["alpha"]}')
    if model == ModelId.GARCH11:
        lam, beta = params['lambda'], params['beta']
        if lam < 0 or beta < 0 or lam + beta >= 1:
            raise DomainError(f'GARCH11 needs lambda, beta >= 0 and lambda + beta < 1, got {lam}, {beta}')
    if spec.burn_in < 0:
        raise DomainError(f'burn_in must be nonnegative, got {spec.burn_in}')
    return params


def _ar_cauchy(rng, size, rho):
    eps = rng.standard_cauchy(size)
    x0 = rng.standard_cauchy() / (1.0 - abs(rho))
    x, _ = lfilter([1.0], [1.0, -rho], eps, zi=[rho * x0])
    return x


def _ar_unif(rng, size, r):
    r = int(r)
    eps = rng.integers(1, r + 1, size=size) / r
    x0 = rng.random()
    x, _ = lfilter([1.0], [1.0, 1.0 / r], eps, zi=[-x0 / r])
    return x


def _mar(rng, size, phi):
    # log X_t = t log phi + max(log X_0, max_{i<=t} log((1 - phi) e_i) - i log phi)
    log_phi = math.log(phi)
    steps = np.arange(1, size + 1)
    log_x0 = -math.log(rng.standard_exponential())
    log_innovations = math.log(1.0 - phi) - np.log(rng.standard_exponential(size))
    running = np.maximum.accumulate(np.maximum(log_x0, log_innovations - steps * log_phi))
    return np.exp(running + steps * log_phi)


def _logistic_step(x, w, alpha):
    # conditional df P(Y <= y | X = x) = w solved for z = log(1 + t), t = exp(-(y - x) / alpha)
    a = math.exp(-x)
    log_w = math.log(w)

    def g(z):
        return a * (1.0 - math.exp(alpha * z)) + (alpha - 1.0) * z - log_w

    upper = max(1.0, -log_w / (1.0 - alpha)) + 1.0
    z = brentq(g, 0.0, upper, xtol=LOGISTIC_XTOL)
    return x - alpha * math.log(math.expm1(max(z, TINY)))


def _markov_logistic(rng, size, alpha):
    uniforms = rng.random(size)
    uniforms[uniforms == 0.0] = TINY
    x = np.empty(size)
    previous = rng.gumbel()
    for t in range(size):
        previous = _logistic_step(previous, uniforms[t], alpha)
        x[t] = previous
    return x


def _garch11(rng, size, lam, beta):
    omega = 1.0 - lam - beta
    eta = rng.standard_normal(size)
    x = np.empty(size)
    sigma2 = 1.0
    previous = 0.0
    for t in range(size):
        sigma2 = omega + lam * previous ** 2 + beta * sigma2
        previous = math.sqrt(sigma2) * eta[t]
        x[t] = previous
    return x


def simulate(spec, n, stream=()):
    """
    Return n observations of the model; draws come from derive_rng(spec.seed, *stream).

    The same (spec, n, stream) always gives the same series.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f'n must be at least 1, got {n}')
    params = validate_params(spec)
    if spec.model == ModelId.MM:
        return mm_simulate(spec.signature or DEFAULT_SIGNATURE, n, spec.seed, stream)

    rng = derive_rng(spec.seed, *stream)
    size = int(spec.burn_in) + n
    if spec.model == ModelId.AR_CAUCHY:
        x = _ar_cauchy(rng, size, params['rho'])
    elif spec.model == ModelId.AR_UNIF:
        x = _ar_unif(rng, size, params['r'])
    elif spec.model == ModelId.MAR:
        x = _mar(rng, size, params['phi'])
    elif spec.model == ModelId.MARKOV_LOGISTIC:
        x = _markov_logistic(rng, size, params['alpha'])
    else:
        x = _garch11(rng, size, params['lambda'], params['beta'])
    logger.debug('Simulated %s n=%d burn_in=%d stream=%s', spec.model.value, n, spec.burn_in, stream)
    return x[-n:]


@lru_cache(maxsize=8)
def _read_document(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f'Cannot read reference table {path}: {exc}')


@lru_cache(maxsize=8)
def load_reference_table(path=REFERENCE_TABLE):
    entries = []
    for entry in _read_document(path).get('entries', []):
        entries.append((ModelId.parse(entry['model']), dict(entry['params']),
                        float(entry['theta']), str(entry['provenance'])))
    return tuple(entries)


def _same_params(left, right):
    return set(left) == set(right) and all(math.isclose(left[key], right[key]) for key in left)


def _find_entry(document, spec):
    params = model_params(spec)
    for entry in document.get('entries', []):
        if ModelId.parse(entry['model']) == spec.model and _same_params(params, entry['params']):
            return entry
    return None


def reference_entry(spec, table=REFERENCE_TABLE):
    """(theta, provenance) for the model, or None when no ground truth is known"""
    if spec.model == ModelId.MM:
        signature = spec.signature or DEFAULT_SIGNATURE
        return mm_extremal_index(signature), 'closed form: sum over signature rows of the largest coefficient'
    params = model_params(spec)
    for model, entry_params, theta, provenance in load_reference_table(table):
        if model == spec.model and _same_params(params, entry_params):
            return theta, provenance
    return None


def reference_theta(spec, table=REFERENCE_TABLE):
    entry = reference_entry(spec, table)
    return None if entry is None else entry[0]


def reference_oracle(spec, table=REFERENCE_TABLE):
    """Oracle run recorded with the model's table entry (n, taus, block, seed, estimates), or None"""
    entry = _find_entry(_read_document(table), spec)
    return None if entry is None else entry.get('oracle')


def record_oracle(spec, estimates, n, block, seed, table=REFERENCE_TABLE):
    """Store an oracle_theta run with the model's entry in the reference table"""
    with open(table, encoding='utf-8') as handle:
        document = json.load(handle)
    entry = _find_entry(document, spec)
    if entry is None:
        raise ConfigurationError(f'No reference entry for {spec.model.value} '
                                 f'with parameters {model_params(spec)} in {table}')
    entry['oracle'] = {
        'n': int(n),
        'taus': [float(tau) for tau in estimates],
        'block': int(block),
        'seed': None if seed is None else int(seed),
        'estimates': {f'{tau:g}': round(value, 4) for tau, value in estimates.items()},
    }
    with open(table, 'w', encoding='utf-8') as handle:
        json.dump(document, handle, indent=2)
        handle.write('\n')
    _read_document.cache_clear()
    load_reference_table.cache_clear()
    logger.info('Recorded oracle run for %s in %s', spec.model.value, table)
    return entry['oracle']


def oracle_theta(spec, n=10 ** 6, taus=ORACLE_TAUS, block=ORACLE_BLOCK, seed=None):
    """
    Brute-force theta from block maxima: -log P(M_b <= u_b) / tau.

    u_b is the empirical 1 - tau / b quantile of the whole simulated series
    and P(M_b <= u_b) is the share of the n // block disjoint blocks whose
    maximum stays at or below it. Returns {tau: estimate}.
    """
    if not taus:
        raise DomainError('Oracle needs at least one tau')
    block = int(block)
    if block < 2:
        raise DomainError(f'Oracle block length must be at least 2, got {block}')
    if n // block < 1:
        raise DomainError(f'Oracle needs n >= block, got n={n}, block={block}')
    if seed is not None:
        spec = ModelSpec(spec.model, spec.params, spec.burn_in, int(seed), spec.signature)
    x = as_series(simulate(spec, n))
    maxima = x[:(n // block) * block].reshape(-1, block).max(axis=1)

    estimates = {}
    for tau in taus:
        if not 0 < tau < block:
            raise DomainError(f'Oracle tau must lie in (0, {block}), got {tau}')
        level = empirical_quantile(x, 1.0 - tau / block)
        below = np.count_nonzero(maxima <= level) / maxima.size
        if below == 0.0:
            raise DegenerateError(f'No block maximum stays below the level for tau={tau}')
        estimates[float(tau)] = -math.log(below) / tau
    spread = max(estimates.values()) - min(estimates.values())
    if spread > ORACLE_AGREEMENT:
        logger.warning('Oracle estimates for %s differ by %.3f across tau', spec.model.value, spread)
    logger.info('Oracle theta for %s: %s', spec.model.value,
                ', '.join(f'tau={tau:g}: {value:.4f}' for tau, value in estimates.items()))
    return estimates
