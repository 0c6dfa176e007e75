"""
Tests for thresholds, exceedances and the cycle transform.
"""

import numpy as np
import pytest

from core import (as_series, block_cycles, derive_rng, empirical_quantile, exceedance_counts,
                  exceedance_summary, resolve_level, upcrossing_count)
from errors import DomainError
from models import LevelSpec


class TestSeries:

    def test_rejects_non_finite_values(self):
        with pytest.raises(DomainError):
            as_series([1.0, np.nan, 2.0])
        with pytest.raises(DomainError):
            as_series([1.0, np.inf])

    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            as_series([])

    def test_returns_float_array(self):
        x = as_series([1, 2, 3])
        assert x.dtype == float
        np.testing.assert_array_equal(x, [1.0, 2.0, 3.0])


class TestEmpiricalQuantile:

    def test_order_statistic(self):
        assert empirical_quantile(np.arange(1, 101), 0.95) == 95

    def test_constant_series(self):
        assert empirical_quantile([7, 7, 7], 0.5) == 7

    def test_uniform_sample(self, rng):
        assert empirical_quantile(rng.random(10000), 0.95) == pytest.approx(0.95, abs=0.01)

    @pytest.mark.parametrize('p', [0.0, 1.0, -0.1, 1.5])
    def test_probability_out_of_range(self, p):
        with pytest.raises(DomainError):
            empirical_quantile([1.0, 2.0], p)

    def test_permutation_invariant(self, rng):
        x = rng.normal(size=500)
        assert empirical_quantile(x, 0.9) == empirical_quantile(rng.permutation(x), 0.9)


class TestResolveLevel:

    def test_normalized_level(self):
        assert resolve_level(np.arange(1, 101), LevelSpec.normalized(5)) == 95
        assert resolve_level(np.arange(1, 1001), LevelSpec.normalized(50)) == 950

    def test_absolute_level_is_identity(self, rng):
        assert resolve_level(rng.normal(size=10), LevelSpec.absolute(3.2)) == 3.2

    def test_normalized_matches_quantile(self, rng):
        x = rng.normal(size=1000)
        assert resolve_level(x, LevelSpec.normalized(50)) == resolve_level(x, LevelSpec.quantile(0.95))

    def test_tau_not_below_n(self):
        with pytest.raises(DomainError):
            resolve_level(np.arange(10), LevelSpec.normalized(10))

    def test_invalid_specs(self):
        with pytest.raises(DomainError):
            LevelSpec.quantile(1.0)
        with pytest.raises(DomainError):
            LevelSpec.normalized(0)


class TestExceedances:

    def test_alternating_series(self):
        summary = exceedance_summary([0, 2, 0, 2, 0], 1)
        assert summary.count == 2
        np.testing.assert_array_equal(summary.indices, [1, 3])
        np.testing.assert_array_equal(summary.interexceedance_times, [2])

    def test_strict_inequality(self):
        assert exceedance_summary([5, 5, 5], 5).count == 0

    def test_interexceedance_times(self):
        summary = exceedance_summary([2, 0, 0, 2, 2, 0], 1)
        assert summary.count == 3
        np.testing.assert_array_equal(summary.indices, [0, 3, 4])
        np.testing.assert_array_equal(summary.interexceedance_times, [3, 1])

    def test_level_at_maximum(self, rng):
        x = rng.normal(size=100)
        assert exceedance_summary(x, x.max()).count == 0

    def test_exceedance_counts(self):
        counts = exceedance_counts(np.array([True, False, True, True]))
        np.testing.assert_array_equal(counts, [0, 1, 1, 2, 3])


class TestUpcrossings:

    def test_alternating_series(self):
        assert upcrossing_count([0, 2, 0, 2, 0], 1) == 2

    def test_monotone_series(self):
        assert upcrossing_count([1, 2, 3, 4], 2.5) == 1

    def test_level_above_maximum(self, rng):
        x = rng.normal(size=100)
        assert upcrossing_count(x, x.max()) == 0

    def test_tie_at_level_counts_as_below(self):
        assert upcrossing_count([1, 2, 1, 2], 1) == 2


class TestBlockCycles:

    def test_block_maxima(self):
        cycles = block_cycles([1, 5, 2, 4, 3, 9], 3)
        np.testing.assert_array_equal(cycles.values, [5, 4, 9])
        assert cycles.m == 3
        assert cycles.block_length == 2

    def test_k_two_is_identity(self, rng):
        x = rng.normal(size=257)
        np.testing.assert_array_equal(block_cycles(x, 2).values, x)

    def test_remainder_discarded(self):
        cycles = block_cycles([1, 5, 2, 4, 3], 3)
        np.testing.assert_array_equal(cycles.values, [5, 4])

    def test_series_shorter_than_block(self):
        with pytest.raises(DomainError):
            block_cycles([1, 2], 4)

    def test_k_below_two(self):
        with pytest.raises(DomainError):
            block_cycles([1, 2, 3], 1)

    @pytest.mark.parametrize('k', [2, 3, 5, 8])
    def test_count_ordering(self, rng, k):
        x = rng.standard_cauchy(1003)
        cycles = block_cycles(x, k)
        used = x[:cycles.m * (k - 1)]
        level = np.quantile(x, 0.9)
        n_z = exceedance_summary(cycles.values, level).count
        assert upcrossing_count(cycles.values, level) <= n_z <= exceedance_summary(used, level).count

    def test_cycles_dominate_their_blocks(self, rng):
        x = rng.normal(size=100)
        cycles = block_cycles(x, 4)
        assert np.all(cycles.values[:, None] >= x[:cycles.m * 3].reshape(-1, 3))


class TestDeriveRng:

    def test_same_stream_same_draws(self):
        np.testing.assert_array_equal(derive_rng(5, 1).random(10), derive_rng(5, 1).random(10))

    def test_streams_differ(self):
        assert not np.array_equal(derive_rng(5, 1).random(10), derive_rng(5, 2).random(10))

    def test_negative_keys(self):
        with pytest.raises(DomainError):
            derive_rng(-1)
