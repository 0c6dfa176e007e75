"""
Finite moving maxima processes X_t = max_{l, j} alpha[l, j] * Y[l, t - j].

Y are i.i.d. unit Frechet innovations. A signature satisfies D(k), k >= 2,
iff for every (l, j)

    alpha[l, j] ^ max_{s >= k+1} alpha[l, j+s-1] <= max_{s=2..k} alpha[l, j+s-1]

and D(1) iff each row has a single positive coefficient.
"""

import logging
from fractions import Fraction

import numpy as np

from core import derive_rng
from errors import DataError, DomainError
from models import DkCheck, MMSignature

logger = logging.getLogger(__name__)

FLOAT_SLACK = 1e-12


def signature_from_weights(weights, row=1):
    """Single-row signature with alpha[row, j] = weights[j], j = 0..len - 1"""
    return MMSignature({(row, j): w for j, w in enumerate(weights)})


def parse_coefficient(text):
    if isinstance(text, (int, Fraction, float)):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise DataError(f'Invalid signature coefficient {text!r}')


def parse_signature(rows):
    """Build a signature from (l, j, alpha) rows; string coefficients such as '2/6' stay exact"""
    coefficients = {}
    for number, (l, j, alpha) in enumerate(rows, start=1):
        try:
            key = (int(l), int(j))
        except (TypeError, ValueError):
            raise DataError(f'Row {number}: l and j must be integers, got {l!r}, {j!r}')
        if key in coefficients:
            raise DataError(f'Row {number}: duplicate coefficient for l={key[0]}, j={key[1]}')
        coefficients[key] = parse_coefficient(alpha)
    return MMSignature(coefficients)


DEFAULT_SIGNATURE = signature_from_weights([Fraction(2, 6), Fraction(1, 6), Fraction(3, 6)])


def _exceeds(lhs, rhs, exact):
    return lhs > rhs if exact else lhs > rhs + FLOAT_SLACK


def mm_check_dk(sig, k):
    """Decide D(k) for the signature; on failure the witness is the first violating (l, j)"""
    k = int(k)
    if k < 1:
        raise DomainError(f'k must be at least 1, got {k}')

    if k == 1:
        for l in sig.rows:
            positive = [j for j in range(sig.j_min, sig.j_max + 1) if sig.alpha(l, j) > 0]
            if len(positive) != 1:
                witness = (l, positive[1]) if len(positive) > 1 else (l, sig.j_min)
                return DkCheck(k=1, holds=False, witness=witness)
        return DkCheck(k=1, holds=True)

    for l in sig.rows:
        for j in range(sig.j_min - k, sig.j_max + 1):
            later = [sig.alpha(l, j + s - 1) for s in range(k + 1, sig.j_max - j + 2)]
            lhs = min(sig.alpha(l, j), max(later, default=0))
            rhs = max(sig.alpha(l, j + s - 1) for s in range(2, k + 1))
            if _exceeds(lhs, rhs, sig.exact):
                return DkCheck(k=k, holds=False, witness=(l, j))
    return DkCheck(k=k, holds=True)


def mm_min_k(sig, k_max):
    """Smallest k <= k_max for which D(k) holds, or None"""
    k_max = int(k_max)
    if k_max < 1:
        raise DomainError(f'k_max must be at least 1, got {k_max}')
    for k in range(1, k_max + 1):
        if mm_check_dk(sig, k):
            return k
    # every finite signature satisfies D(width + 1)
    assert k_max < sig.width + 1, 'D(k) must hold once k exceeds the signature width'
    return None


def mm_extremal_index(sig):
    """theta = sum over rows of the largest coefficient"""
    return float(sum(max(sig.row(l)) for l in sig.rows))


def mm_simulate(sig, n, seed, stream=()):
    """Simulate X_1..X_n; innovations come from derive_rng(seed, *stream)"""
    n = int(n)
    if n < 1:
        raise DomainError(f'n must be at least 1, got {n}')
    rows = sig.rows
    row_index = {l: i for i, l in enumerate(rows)}
    rng = derive_rng(seed, *stream)
    # column c of the innovations holds Y[l, t - j] for t - j = c + 1 - j_max
    innovations = 1.0 / rng.standard_exponential((len(rows), n + sig.width - 1))
    x = np.zeros(n)
    for (l, j), alpha in sig.coefficients.items():
        if alpha == 0:
            continue
        start = sig.j_max - j
        np.maximum(x, float(alpha) * innovations[row_index[l], start:start + n], out=x)
    logger.debug('Simulated MM series n=%d with %d coefficients', n, len(sig.coefficients))
    return x
