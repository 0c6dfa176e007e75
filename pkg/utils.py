import json
import os

import numpy as np
import pandas as pd

from errors import ConfigurationError, DataError, ExtremalError
from mm import parse_signature
from models import EstimatorId, ModelId, ModelSpec, StudyConfig

SPREADSHEET_EXTENSIONS = ('.xlsx', '.xls')
STUDY_KEYS = {'model', 'n', 'replicates', 'k', 'quantiles', 'estimators', 'run',
              'master_seed', 'upper_fraction', 'n_jobs'}
MODEL_KEYS = {'id', 'params', 'burn_in', 'signature'}


def _read_first_column(file_path):
    """
    Read the first column of a csv/txt or spreadsheet file as text.

    Returns (row number, text) pairs; row numbers are 1-based file rows so that
    error messages point at the line a user sees in an editor.
    """
    try:
        if os.path.splitext(str(file_path))[1].lower() in SPREADSHEET_EXTENSIONS:
            df = pd.read_excel(file_path, header=None, dtype=str)
        else:
            df = pd.read_csv(file_path, header=None, dtype=str, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise DataError(f'{file_path} is empty')
    except (OSError, ValueError) as e:
        raise DataError(f'Error reading {file_path}: {str(e)}')

    column = df.iloc[:, 0]
    rows = [(idx + 1, value) for idx, value in enumerate(column)
            if not (pd.isna(value) or str(value).strip() == '')]
    if not rows:
        raise DataError(f'{file_path} has no values')
    return rows


def _is_number(text):
    try:
        float(str(text).strip())
        return True
    except ValueError:
        return False


def _load_values(file_path):
    rows = _read_first_column(file_path)
    if not _is_number(rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise DataError(f'{file_path} has a header but no values')

    values = []
    for row_number, text in rows:
        try:
            value = float(str(text).strip())
        except ValueError:
            raise DataError(f'Row {row_number}: {str(text).strip()!r} is not a number')
        if not np.isfinite(value):
            raise DataError(f'Row {row_number}: value must be finite')
        values.append(value)
    return np.array(values), [row_number for row_number, _ in rows]


def load_series(file_path):
    """
    One value per row; a single non-numeric first row is taken as a header.
    Decimal separator is '.'.
    """
    return _load_values(file_path)[0]


def ingest_prices(file_path):
    """
    Log-returns of a price file.

    Each price equal to its predecessor is removed first, so the result has
    (retained prices - 1) values.
    """
    prices, row_numbers = _load_values(file_path)
    for price, row_number in zip(prices, row_numbers):
        if price <= 0:
            raise DataError(f'Row {row_number}: price must be positive, got {price:g}')

    keep = np.ones(prices.size, dtype=bool)
    keep[1:] = prices[1:] != prices[:-1]
    retained = prices[keep]
    if retained.size < 2:
        raise DataError(f'At least 2 distinct consecutive prices are needed, got {retained.size}')
    return np.diff(np.log(retained))


def load_signature(file_path):
    """
    Signature file: a header line "l j alpha" followed by one coefficient per
    line, fields separated by commas or whitespace. alpha may be a fraction
    such as 2/6, which keeps the signature exact. Lines starting with # are
    ignored.
    """
    try:
        with open(file_path, encoding='utf-8') as handle:
            lines = [line.strip() for line in handle]
    except OSError as e:
        raise DataError(f'Error reading {file_path}: {str(e)}')

    rows = []
    header_seen = False
    for number, line in enumerate(lines, start=1):
        if not line or line.startswith('#'):
            continue
        fields = line.replace(',', ' ').split()
        if not header_seen:
            if [f.lower() for f in fields] != ['l', 'j', 'alpha']:
                raise DataError(f'Row {number}: expected header "l j alpha", got {line!r}')
            header_seen = True
            continue
        if len(fields) != 3:
            raise DataError(f'Row {number}: expected 3 fields (l j alpha), got {len(fields)}')
        rows.append(fields)
    if not rows:
        raise DataError(f'{file_path} has no coefficients')
    return parse_signature(rows)


def model_spec_from_dict(document, seed=0):
    unknown = set(document) - MODEL_KEYS
    if unknown:
        raise ConfigurationError(f'Unknown model keys: {sorted(unknown)}')
    if 'id' not in document:
        raise ConfigurationError('Model needs an id')
    model = ModelId.parse(document['id'])
    signature = None
    if document.get('signature') is not None:
        if model != ModelId.MM:
            raise ConfigurationError('Only MM models take a signature')
        try:
            signature = parse_signature(document['signature'])
        except ExtremalError as e:
            raise ConfigurationError(f'Invalid signature: {str(e)}')
    params = {key: float(value) for key, value in dict(document.get('params') or {}).items()}
    return ModelSpec(model=model, params=params, burn_in=int(document.get('burn_in', 1000)),
                     seed=seed, signature=signature)


def study_config_from_dict(document, n_jobs=1):
    """Build a StudyConfig from a parsed JSON document"""
    unknown = set(document) - STUDY_KEYS
    if unknown:
        raise ConfigurationError(f'Unknown study keys: {sorted(unknown)}')
    missing = {'model', 'n', 'replicates', 'k', 'quantiles', 'estimators'} - set(document)
    if missing:
        raise ConfigurationError(f'Missing study keys: {sorted(missing)}')

    try:
        master_seed = int(document.get('master_seed', 0))
        return StudyConfig(
            model=model_spec_from_dict(document['model'], seed=master_seed),
            n=int(document['n']),
            replicates=int(document['replicates']),
            k=int(document['k']),
            quantiles=tuple(float(q) for q in document['quantiles']),
            estimators=tuple(EstimatorId.parse(e) for e in document['estimators']),
            run=None if document.get('run') is None else int(document['run']),
            master_seed=master_seed,
            upper_fraction=float(document.get('upper_fraction', 0.05)),
            n_jobs=int(document.get('n_jobs', n_jobs)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f'Invalid study configuration: {str(e)}')


def load_study_config(file_path, n_jobs=1):
    try:
        with open(file_path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as e:
        raise ConfigurationError(f'Error reading {file_path}: {str(e)}')
    except json.JSONDecodeError as e:
        raise ConfigurationError(f'{file_path} is not valid JSON: {str(e)}')
    if not isinstance(document, dict):
        raise ConfigurationError(f'{file_path} must hold a JSON object')
    return study_config_from_dict(document, n_jobs=n_jobs)


def render(frame, fmt='csv'):
    """csv keeps full precision; markdown rounds to 4 significant digits"""
    if fmt == 'csv':
        return frame.to_csv(index=False, lineterminator='\n')
    if fmt == 'markdown':
        return frame.to_markdown(index=False, floatfmt='.4g', missingval='') + '\n'
    raise ConfigurationError(f'Unknown output format {fmt!r}; expected csv or markdown')


def emit(frame, file_path=None, fmt='csv'):
    """Render the frame and write it to file_path when given; returns the text"""
    text = render(frame, fmt)
    if file_path is not None:
        try:
            directory = os.path.dirname(os.path.abspath(file_path))
            os.makedirs(directory, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8', newline='\n') as handle:
                handle.write(text)
        except OSError as e:
            raise DataError(f'Cannot write {file_path}: {str(e)}')
    return text
