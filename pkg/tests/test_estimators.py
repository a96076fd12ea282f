"""Distance statistics: brute-force agreement, exact identities, null moments."""

import math

import numpy as np
import pytest

from longstat import (
    GaussianSource,
    asymptotic_test,
    bias_correction,
    distance_sq,
    local_periodogram_matrix,
    make_block_scheme,
    normal_quantile,
    quartic_sum,
    sum_sq_local,
    sum_sq_pooled,
    summarize,
)
from longstat.errors import DegenerateInputError, InvalidArgumentError

from . import oracles


def matrix(series, n_window):
    return local_periodogram_matrix(series, make_block_scheme(len(series), n_window))


@pytest.fixture
def pg96():
    return matrix(GaussianSource(21).standard_normal(96), 16)


class TestAgainstBruteForce:
    def test_all_pieces_match_plain_loops(self, pg96):
        x = GaussianSource(21).standard_normal(96)
        f1, f2, d2, bias, quartic = oracles.stat_pieces_brute(x, 16)
        assert sum_sq_local(pg96) == pytest.approx(f1, rel=1e-10)
        assert sum_sq_pooled(pg96) == pytest.approx(f2, rel=1e-10)
        assert distance_sq(pg96) == pytest.approx(d2, rel=1e-9)
        assert bias_correction(pg96) == pytest.approx(bias, rel=1e-10)
        assert quartic_sum(pg96) == pytest.approx(quartic, rel=1e-10)


class TestExactIdentities:
    def test_linear_combinations(self, pg96):
        # the distance and bias are fixed linear images of the two sums
        s1 = sum_sq_local(pg96)
        s2 = sum_sq_pooled(pg96)
        assert distance_sq(pg96) == pytest.approx(2 * np.pi * s1 - 4 * np.pi * s2, rel=1e-15)
        scheme = pg96.scheme
        assert bias_correction(pg96) == pytest.approx(
            2 * np.pi * scheme.n_window / scheme.n_used * s1, rel=1e-15
        )

    def test_single_block_pooled_equals_local(self):
        # with one window the pooled column means are the row itself
        x = GaussianSource(22).standard_normal(16)
        pg = matrix(x, 16)
        assert pg.scheme.n_blocks == 1
        assert sum_sq_pooled(pg) == sum_sq_local(pg)
        assert distance_sq(pg) == pytest.approx(-2 * np.pi * sum_sq_local(pg), rel=1e-15)

    def test_summary_fields_equal_the_functions(self, pg96):
        s = summarize(pg96)
        assert s.sum_sq_local == sum_sq_local(pg96)
        assert s.sum_sq_pooled == sum_sq_pooled(pg96)
        assert s.distance_sq == distance_sq(pg96)
        assert s.bias == bias_correction(pg96)
        assert s.quartic_sum == quartic_sum(pg96)

    def test_statistic_scale_invariant(self):
        # periodogram scales by c^2, numerator and denominator by c^4
        x = GaussianSource(23).standard_normal(256)
        base = summarize(matrix(x, 32)).statistic
        for c in (1e-6, 0.1, 7.3, 1e6):
            scaled = summarize(matrix(c * x, 32)).statistic
            assert scaled == pytest.approx(base, abs=1e-8)

    def test_statistic_standardizes_the_corrected_distance(self, pg96):
        s = summarize(pg96)
        expected = (
            math.sqrt(96) * (s.distance_sq + s.bias)
            / math.sqrt(4 * np.pi**2 * s.quartic_sum)
        )
        assert s.statistic == pytest.approx(expected, rel=1e-15)

    def test_constant_series_has_nan_statistic(self):
        s = summarize(matrix(np.ones(64), 16))
        assert s.quartic_sum == 0.0
        assert math.isnan(s.statistic)


N_REPS = 4000
N_WINDOW = 16
N_BLOCKS = 4


@pytest.fixture(scope="module")
def null_samples():
    """(sum_sq_local, sum_sq_pooled, corrected distance, quartic, distance)
    for N_REPS independent white noise draws on a 4x16 layout."""
    scheme = make_block_scheme(N_WINDOW * N_BLOCKS, N_WINDOW)
    root = GaussianSource(24)
    rows = np.empty((N_REPS, 5))
    for r in range(N_REPS):
        x = root.child(r).standard_normal(scheme.n_used)
        pg = local_periodogram_matrix(x, scheme)
        d2 = distance_sq(pg)
        rows[r] = (
            sum_sq_local(pg),
            sum_sq_pooled(pg),
            d2 + bias_correction(pg),
            quartic_sum(pg),
            d2,
        )
    return rows


def four_se(draws):
    return 4.0 * draws.std(ddof=1) / math.sqrt(len(draws))


class TestWhiteNoiseMoments:
    """Monte Carlo means against the closed-form null expectations.

    At interior Fourier frequencies the periodogram of Gaussian white
    noise with unit variance has iid Exp(mean 1/(2*pi)) ordinates, so
    with K = N/2 - 1 interior frequencies per window:

        E sum_sq_local  = K / (2 pi^2 N)
        E sum_sq_pooled = K (1 + 1/M) / (4 pi^2 N)
        E distance_sq   = -K / (pi N M)
        E quartic_sum   = K / (4 pi^4 N)

    and the bias correction cancels the distance in expectation exactly.
    Checks use +-4 standard errors of the simulated mean.
    """

    def test_mean_sum_sq_local(self, null_samples):
        expected = oracles.expected_sum_sq_local_white(N_WINDOW)
        got = null_samples[:, 0].mean()
        assert abs(got - expected) < four_se(null_samples[:, 0])

    def test_mean_sum_sq_pooled(self, null_samples):
        expected = oracles.expected_sum_sq_pooled_white(N_WINDOW, N_BLOCKS)
        got = null_samples[:, 1].mean()
        assert abs(got - expected) < four_se(null_samples[:, 1])

    def test_bias_correction_centres_the_distance(self, null_samples):
        got = null_samples[:, 2].mean()
        assert abs(got - 0.0) < four_se(null_samples[:, 2])

    def test_mean_quartic_sum(self, null_samples):
        expected = oracles.expected_quartic_sum_white(N_WINDOW)
        got = null_samples[:, 3].mean()
        assert abs(got - expected) < four_se(null_samples[:, 3])

    def test_mean_distance_matches_negative_bias_formula(self, null_samples):
        expected = oracles.expected_distance_sq_white(N_WINDOW, N_BLOCKS)
        got = null_samples[:, 4].mean()
        assert abs(got - expected) < four_se(null_samples[:, 4])


class TestAsymptoticTest:
    def test_white_noise_result_contract(self):
        x = GaussianSource(25).standard_normal(512)
        res = asymptotic_test(x, 32, alpha=0.05)
        assert res.method == "asymptotic"
        assert res.alpha == 0.05
        assert res.threshold == pytest.approx(normal_quantile(0.95))
        assert res.reject == (res.statistic >= res.threshold)
        assert res.summary.statistic == res.statistic
        assert res.diagnostics["n_discarded"] == 0

    def test_rejects_blatant_variance_shift(self):
        rng = GaussianSource(26)
        x = np.concatenate(
            [rng.child(0).standard_normal(256), 6.0 * rng.child(1).standard_normal(256)]
        )
        assert asymptotic_test(x, 32, alpha=0.05).reject

    def test_threshold_monotone_in_alpha(self):
        x = GaussianSource(27).standard_normal(512)
        t1 = asymptotic_test(x, 32, alpha=0.01).threshold
        t5 = asymptotic_test(x, 32, alpha=0.05).threshold
        assert t1 > t5

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -1e-9])
    def test_rejects_bad_alpha(self, alpha):
        with pytest.raises(InvalidArgumentError, match="alpha"):
            asymptotic_test(np.zeros(64) + np.arange(64), 16, alpha=alpha)

    def test_needs_two_windows(self):
        with pytest.raises(InvalidArgumentError, match="at least 2 full windows"):
            asymptotic_test(GaussianSource(28).standard_normal(20), 16)

    def test_degenerate_series_raises(self):
        with pytest.raises(DegenerateInputError, match="ordinates are zero"):
            asymptotic_test(np.ones(64), 16)
