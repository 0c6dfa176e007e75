"""
Tests for file ingestion, study configuration files and output rendering.
"""

import math
import os

import numpy as np
import pandas as pd
import pytest

from errors import ConfigurationError, DataError
from mm import DEFAULT_SIGNATURE
from models import EstimatorId, ModelId
from utils import (emit, ingest_prices, load_series, load_signature, load_study_config, render,
                   study_config_from_dict)

STUDIES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'studies')


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


class TestLoadSeries:

    def test_plain_values(self, tmp_path):
        x = load_series(write(tmp_path, 'x.csv', '1.5\n-2\n3e2\n'))
        np.testing.assert_array_equal(x, [1.5, -2.0, 300.0])

    def test_header_and_blank_lines(self, tmp_path):
        x = load_series(write(tmp_path, 'x.csv', 'value\n1\n\n2\n'))
        np.testing.assert_array_equal(x, [1.0, 2.0])

    def test_bad_row_is_named(self, tmp_path):
        with pytest.raises(DataError, match='Row 3'):
            load_series(write(tmp_path, 'x.csv', 'value\n1\nabc\n'))

    def test_header_only(self, tmp_path):
        with pytest.raises(DataError):
            load_series(write(tmp_path, 'x.csv', 'value\n'))

    def test_empty_file(self, tmp_path):
        with pytest.raises(DataError):
            load_series(write(tmp_path, 'x.csv', ''))


class TestIngestPrices:

    def test_log_returns(self, tmp_path):
        returns = ingest_prices(write(tmp_path, 'p.csv', 'price\n100\n110\n99\n'))
        np.testing.assert_allclose(returns, [math.log(1.1), math.log(0.9)])

    def test_repeated_prices_are_dropped(self, tmp_path):
        returns = ingest_prices(write(tmp_path, 'p.csv', '100\n100\n100\n101\n101\n100\n'))
        np.testing.assert_allclose(returns, [math.log(1.01), math.log(100 / 101)])

    def test_non_positive_price(self, tmp_path):
        with pytest.raises(DataError, match='Row 3'):
            ingest_prices(write(tmp_path, 'p.csv', 'price\n100\n0\n101\n'))

    def test_needs_two_distinct_prices(self, tmp_path):
        with pytest.raises(DataError):
            ingest_prices(write(tmp_path, 'p.csv', '5\n5\n5\n'))

    def test_spreadsheet(self, tmp_path):
        path = str(tmp_path / 'p.xlsx')
        pd.DataFrame({'price': [100.0, 110.0, 110.0, 121.0]}).to_excel(path, index=False)
        np.testing.assert_allclose(ingest_prices(path), [math.log(1.1), math.log(1.1)])


class TestLoadSignature:

    def test_mixed_separators(self, tmp_path):
        path = write(tmp_path, 'sig.txt', '# example\nl j alpha\n1 0 2/6\n1,1,1/6\n1 2 3/6\n')
        sig = load_signature(path)
        assert sig.exact
        assert sig.coefficients == DEFAULT_SIGNATURE.coefficients

    def test_missing_header(self, tmp_path):
        with pytest.raises(DataError, match='Row 1'):
            load_signature(write(tmp_path, 'sig.txt', '1 0 1\n'))

    def test_wrong_field_count(self, tmp_path):
        with pytest.raises(DataError, match='Row 2'):
            load_signature(write(tmp_path, 'sig.txt', 'l j alpha\n1 0\n'))


class TestStudyConfig:

    def test_bundled_configs(self):
        config = load_study_config(os.path.join(STUDIES, 'mm.json'))
        assert config.model.model == ModelId.MM
        assert config.model.signature.coefficients == DEFAULT_SIGNATURE.coefficients
        assert config.model.seed == config.master_seed
        assert config.quantiles == (0.95, 0.975, 0.99)
        assert EstimatorId.FINDTDC in config.estimators
        assert load_study_config(os.path.join(STUDIES, 'garch.json')).k == 5

    def test_defaults(self):
        config = study_config_from_dict({'model': {'id': 'MAR'}, 'n': 500, 'replicates': 2, 'k': 3,
                                         'quantiles': [0.9], 'estimators': ['fdir']}, n_jobs=3)
        assert config.n_jobs == 3
        assert config.runs_parameter == 3
        assert config.estimators == (EstimatorId.FDIR,)

    @pytest.mark.parametrize('document', [
        {'model': {'id': 'MAR'}, 'n': 500, 'replicates': 2, 'k': 3, 'quantiles': [0.9],
         'estimators': ['FDIR'], 'seed': 1},
        {'model': {'id': 'MAR'}, 'n': 500, 'replicates': 2, 'k': 3, 'quantiles': [0.9],
         'estimators': ['HILL']},
        {'model': {'id': 'MAR'}, 'n': 500, 'replicates': 2, 'k': 3, 'estimators': ['FDIR']},
        {'model': {'id': 'MAR', 'signature': [[1, 0, '1']]}, 'n': 500, 'replicates': 2, 'k': 3,
         'quantiles': [0.9], 'estimators': ['FDIR']},
        {'model': {'id': 'MAR'}, 'n': 500, 'replicates': 0, 'k': 3, 'quantiles': [0.9],
         'estimators': ['FDIR']},
        {'model': {'id': 'MAR'}, 'n': 500, 'replicates': 2, 'k': 3, 'quantiles': [1.5],
         'estimators': ['FDIR']},
    ])
    def test_invalid_documents(self, document):
        with pytest.raises(ConfigurationError):
            study_config_from_dict(document)

    def test_invalid_json(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_study_config(write(tmp_path, 'study.json', '{"n": '))


class TestEmit:

    def test_csv_keeps_precision(self):
        text = render(pd.DataFrame({'value': [1 / 3]}))
        assert text == 'value\n0.3333333333333333\n'

    def test_markdown_rounds(self):
        text = render(pd.DataFrame({'value': [1 / 3]}), 'markdown')
        assert '0.3333' in text
        assert '0.33333' not in text

    def test_empty_frame_keeps_header(self):
        assert render(pd.DataFrame(columns=['estimator', 'value'])) == 'estimator,value\n'

    def test_unknown_format(self):
        with pytest.raises(ConfigurationError):
            render(pd.DataFrame({'value': [1.0]}), 'json')

    def test_writes_file(self, tmp_path):
        path = tmp_path / 'out' / 'result.csv'
        text = emit(pd.DataFrame({'value': [1.0]}), str(path))
        assert path.read_text(encoding='utf-8') == text

    def test_unwritable_path(self, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('', encoding='utf-8')
        with pytest.raises(DataError):
            emit(pd.DataFrame({'value': [1.0]}), str(blocker / 'result.csv'))
