"""Block layout, seeded streams, and the normal quantile."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from longstat import GaussianSource, as_series, make_block_scheme, normal_quantile
from longstat.errors import InvalidArgumentError

from .oracles import normal_quantile_bisect


class TestAsSeries:
    def test_list_becomes_float64(self):
        x = as_series([1, 2, 3])
        assert x.dtype == np.float64
        np.testing.assert_array_equal(x, [1.0, 2.0, 3.0])

    def test_rejects_matrix(self):
        with pytest.raises(InvalidArgumentError, match="one-dimensional"):
            as_series(np.zeros((3, 3)))

    def test_rejects_single_value(self):
        with pytest.raises(InvalidArgumentError, match="at least 2"):
            as_series([1.0])

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(InvalidArgumentError, match="NaN or infinite"):
            as_series([0.0, bad, 1.0])


class TestBlockScheme:
    def test_layout_with_remainder(self):
        s = make_block_scheme(100, 16)
        assert s.n_blocks == 6
        assert s.n_used == 96
        assert s.n_discarded == 4
        np.testing.assert_array_equal(s.block_starts, [0, 16, 32, 48, 64, 80])
        np.testing.assert_allclose(s.midpoints, (np.arange(6) + 0.5) * 16 / 96)

    def test_exact_fit_discards_nothing(self):
        s = make_block_scheme(128, 32)
        assert s.n_discarded == 0
        assert s.n_blocks == 4

    @pytest.mark.parametrize("n_window", [3, 7, 15])
    def test_rejects_odd_window(self, n_window):
        with pytest.raises(InvalidArgumentError, match="even"):
            make_block_scheme(64, n_window)

    def test_rejects_tiny_window(self):
        with pytest.raises(InvalidArgumentError, match="at least 4"):
            make_block_scheme(64, 2)

    def test_rejects_window_longer_than_series(self):
        with pytest.raises(InvalidArgumentError, match="exceeds"):
            make_block_scheme(16, 32)

    @given(
        n_blocks=st.integers(min_value=1, max_value=50),
        half_window=st.integers(min_value=2, max_value=64),
        extra=st.integers(min_value=0, max_value=127),
    )
    @settings(max_examples=200, deadline=None)
    def test_midpoints_partition_unit_interval(self, n_blocks, half_window, extra):
        n_window = 2 * half_window
        n_obs = n_blocks * n_window + min(extra, n_window - 1)
        s = make_block_scheme(n_obs, n_window)
        assert s.n_blocks == n_blocks
        assert s.n_used + s.n_discarded == n_obs
        assert np.all(s.midpoints > 0.0)
        assert np.all(s.midpoints < 1.0)
        # equispaced with gap N/n_used, centered within each window
        gaps = np.diff(s.midpoints)
        np.testing.assert_allclose(gaps, n_window / s.n_used)
        np.testing.assert_allclose(
            s.midpoints, (s.block_starts + n_window / 2) / s.n_used
        )


class TestGaussianSource:
    def test_same_seed_and_key_bit_identical(self):
        a = GaussianSource(7, key=(1, 2)).standard_normal(100)
        b = GaussianSource(7, key=(1, 2)).standard_normal(100)
        np.testing.assert_array_equal(a, b)

    def test_child_equals_explicit_key(self):
        via_child = GaussianSource(7).child(3).child(1, 4).standard_normal(10)
        direct = GaussianSource(7, key=(3, 1, 4)).standard_normal(10)
        np.testing.assert_array_equal(via_child, direct)

    def test_sibling_streams_differ(self):
        root = GaussianSource(7)
        a = root.child(0).standard_normal(50)
        b = root.child(1).standard_normal(50)
        assert not np.array_equal(a, b)

    def test_child_does_not_disturb_parent(self):
        a = GaussianSource(7)
        a.child(5)  # deriving a child must not advance the parent state
        b = GaussianSource(7)
        np.testing.assert_array_equal(a.standard_normal(20), b.standard_normal(20))

    def test_integers_respect_bounds(self):
        draws = GaussianSource(7).integers(0, 10, size=1000)
        assert draws.min() >= 0
        assert draws.max() <= 9
        assert len(np.unique(draws)) == 10

    def test_repr_names_seed_and_key(self):
        assert repr(GaussianSource(3, key=(1,))) == "GaussianSource(seed=3, key=(1,))"


class TestNormalQuantile:
    @pytest.mark.parametrize("q", [0.01, 0.05, 0.5, 0.9, 0.95, 0.975, 0.99, 0.999])
    def test_matches_erf_bisection(self, q):
        assert normal_quantile(q) == pytest.approx(normal_quantile_bisect(q), abs=1e-9)

    def test_upper_five_percent_value(self):
        assert normal_quantile(0.95) == pytest.approx(1.6448536269514722, abs=1e-12)

    @given(st.floats(min_value=1e-6, max_value=0.5))
    @settings(max_examples=100, deadline=None)
    def test_antisymmetric(self, q):
        assert normal_quantile(q) == pytest.approx(-normal_quantile(1.0 - q), abs=1e-10)

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.7])
    def test_rejects_levels_outside_unit_interval(self, q):
        with pytest.raises(InvalidArgumentError, match="strictly in"):
            normal_quantile(q)
