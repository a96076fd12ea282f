"""Statistical acceptance gates.

Each test prints one PASS/FAIL line and enforces a tolerance band wide
enough for Monte Carlo error at the stated replication count. Seeds are
pinned, so reruns are bit-for-bit identical. The three bootstrap studies
at the end dominate the runtime (roughly 25 minutes on one core, a few
minutes on eight); everything before them finishes in seconds.

    pytest tests/test_acceptance.py -v

The small studies here deliberately use few runs; they check that the
implementation lands inside the bands, not that it pins the fourth digit
of any rejection rate.
"""

import math

import numpy as np

import longstat as ls
from . import oracles

SEED = 20260814

# Bands for reproducing reference rejection rates with 500-run studies:
# three binomial standard errors at the nominal levels, rounded up.
SIZE_TOL_5 = 0.03
SIZE_TOL_10 = 0.04


def verdict(gate: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'} {gate}: {detail}", flush=True)
    assert ok, f"{gate}: {detail}"


def bootstrap_experiment(model, n_obs, n_window, alphas, n_runs):
    return ls.Experiment(
        model=model,
        grid=((n_obs, n_window),),
        alpha_levels=alphas,
        n_runs=n_runs,
        method="bootstrap",
        bootstrap=ls.BootstrapConfig(
            n_window=n_window, n_replicates=200, max_order=10
        ),
        seed=SEED,
    )


def test_statistic_is_standard_normal_under_the_null():
    # 2000 independent white-noise panels, T=4096, window 64
    root = ls.GaussianSource(SEED).child(60)
    stats = np.empty(2000)
    scheme = ls.make_block_scheme(4096, 64)
    for r in range(2000):
        x = root.child(r).standard_normal(4096)
        stats[r] = ls.summarize(ls.local_periodogram_matrix(x, scheme)).statistic
    mean = float(stats.mean())
    var = float(stats.var())
    rejection = float((stats >= ls.normal_quantile(0.95)).mean())
    ok = (-0.15 <= mean <= 0.15) and (0.8 <= var <= 1.2) and (0.03 <= rejection <= 0.09)
    verdict(
        "null distribution of the standardized statistic",
        ok,
        f"mean {mean:.4f} (|.| <= 0.15), variance {var:.4f} (in [0.8, 1.2]), "
        f"5% rejection {rejection:.4f} (in [0.03, 0.09])",
    )


def test_distance_estimate_approaches_its_limit():
    # mean estimated squared distance drifts toward the closed-form value
    # as T grows with N ~ T^(2/3); 200 runs per size
    spec = ls.builtin_model("tvma-cos", d=0.2)
    target = ls.theoretical_distance_sq(spec).value
    gaps = []
    for idx, (n_obs, n_window) in enumerate(((512, 64), (2048, 162), (8192, 406))):
        root = ls.GaussianSource(SEED).child(50 + idx)
        scheme = ls.make_block_scheme(n_obs, n_window)
        draws = np.empty(200)
        for r in range(200):
            x = ls.simulate_tvfarima(spec, n_obs, rng=root.child(r))
            draws[r] = ls.distance_sq(ls.local_periodogram_matrix(x, scheme))
        gaps.append(abs(float(draws.mean()) - target))
    ok = gaps[0] > gaps[1] > gaps[2]
    verdict(
        "consistency of the squared distance",
        ok,
        f"limit {target:.6f}, |bias| over T=512/2048/8192: "
        + " > ".join(f"{g:.5f}" for g in gaps),
    )


def test_variance_ratio_matches_asymptotic_value():
    check = ls.variance_ratio_check(n_window=128, n_blocks=8, n_reps=20000, seed=0)
    ok = 1.02 <= check.ratio <= 1.12
    verdict(
        "variance ratio of the two integral forms",
        ok,
        f"ratio {check.ratio:.4f} (in [1.02, 1.12]), "
        f"95% CI [{check.ci_low:.4f}, {check.ci_high:.4f}], "
        f"asymptotic value 15/14 = {15 / 14:.4f}",
    )


def test_whittle_recovers_memory_and_autoregression():
    spec = ls.FarimaSpec(d=0.2, ar=(0.5,))
    root = ls.GaussianSource(SEED).child(70)
    d_err = np.empty(100)
    a_err = np.empty(100)
    for r in range(100):
        x = ls.simulate_farima(spec, 4096, root.child(r))
        fit = ls.fit_whittle(x, 1)
        d_err[r] = abs(fit.d - 0.2)
        a_err[r] = abs(fit.ar[0] - 0.5)
    ok = d_err.mean() < 0.05 and a_err.mean() < 0.08
    verdict(
        "Whittle recovery of (d, a1) = (0.2, 0.5)",
        ok,
        f"mean |d error| {d_err.mean():.4f} (< 0.05), "
        f"mean |a1 error| {a_err.mean():.4f} (< 0.08)",
    )


def test_exact_identities_and_determinism():
    failures = []

    def check(name, ok):
        if not ok:
            failures.append(name)

    rng = ls.GaussianSource(SEED).child(80)

    # Parseval over the full frequency circle, even and odd lengths
    for t in (96, 95):
        x = rng.standard_normal(t)
        _, values = ls.full_periodogram(x)
        zero_ordinate = x.sum() ** 2 / (2.0 * np.pi * t)
        if t % 2 == 0:
            circle = zero_ordinate + values[-1] + 2.0 * values[:-1].sum()
        else:
            circle = zero_ordinate + 2.0 * values.sum()
        check(
            f"parseval T={t}",
            math.isclose(2.0 * np.pi * circle, float((x**2).sum()), rel_tol=1e-12),
        )

    # fractional difference and integration invert each other
    x = rng.standard_normal(128)
    for d in (0.1, 0.25, 0.45):
        back = ls.frac_integrate(ls.frac_diff(x, d), d)
        check(f"frac round-trip d={d}", np.allclose(back, x, rtol=0, atol=1e-11))

    # single block: pooling is the identity
    y = rng.standard_normal(64)
    single = ls.local_periodogram_matrix(y, ls.make_block_scheme(64, 64))
    check("single-block pooling", ls.sum_sq_pooled(single) == ls.sum_sq_local(single))

    # the distance and bias are fixed linear images of the two sums
    pg = ls.local_periodogram_matrix(y, ls.make_block_scheme(64, 16))
    s = ls.summarize(pg)
    check(
        "distance identity",
        math.isclose(
            s.distance_sq,
            2.0 * np.pi * s.sum_sq_local - 4.0 * np.pi * s.sum_sq_pooled,
            rel_tol=1e-13,
        ),
    )
    check(
        "bias identity",
        math.isclose(
            s.bias,
            2.0 * np.pi * pg.scheme.n_window / pg.scheme.n_used * s.sum_sq_local,
            rel_tol=1e-13,
        ),
    )

    # the standardized statistic ignores the measurement scale
    for c in (1e-6, 7.3, 1e6):
        scaled = ls.summarize(ls.local_periodogram_matrix(c * y, pg.scheme))
        check(f"scale invariance c={c:g}", abs(scaled.statistic - s.statistic) <= 1e-8)

    # fast transform agrees with the direct definition
    brute = oracles.local_periodogram_matrix_brute(y, 16)
    check("dft vs direct sums", float(np.max(np.abs(pg.values - brute))) <= 1e-9)

    # a fixed seed gives identical tallies whatever the worker count
    exp = ls.Experiment(
        model=ls.FarimaSpec(),
        grid=((64, 8),),
        alpha_levels=(0.05,),
        n_runs=12,
        method="asymptotic",
        seed=SEED,
        burn_in=0,
    )
    serial = ls.run_experiment(exp, n_workers=1)
    pooled = ls.run_experiment(exp, n_workers=2)
    check(
        "worker-count determinism",
        serial.scenarios[0].rejections == pooled.scenarios[0].rejections,
    )

    verdict(
        "exact identities and determinism",
        not failures,
        "all identities hold" if not failures else "failed: " + ", ".join(failures),
    )


def test_bootstrap_size_under_long_memory_ar():
    # FARI(1), d = 0.1, third length with window 32, 500 runs per model
    cases = [((), (0.039, 0.085)), ((0.5,), (0.059, 0.109))]
    ok = True
    details = []
    for ar, targets in cases:
        exp = bootstrap_experiment(
            ls.FarimaSpec(d=0.1, ar=ar), 512, 32, (0.05, 0.10), 500
        )
        scen = ls.run_experiment(exp).scenarios[0]
        for freq, target, tol in zip(scen.frequencies, targets, (SIZE_TOL_5, SIZE_TOL_10)):
            ok = ok and abs(freq - target) <= tol
        details.append(
            "a1=%s: rates (%.3f, %.3f) vs references (%.3f, %.3f), %d failed runs"
            % (ar[0] if ar else 0, *scen.frequencies, *targets, scen.n_failed)
        )
    verdict("bootstrap size, long-memory AR", ok, "; ".join(details))


def test_bootstrap_size_under_long_memory_ma():
    # FARIMA(0, d, 1), d = 0.2, theta = 0.9, shortest tabulated length
    exp = bootstrap_experiment(
        ls.FarimaSpec(d=0.2, ma=(0.9,)), 256, 32, (0.05, 0.10), 500
    )
    scen = ls.run_experiment(exp).scenarios[0]
    targets = (0.040, 0.083)
    ok = (
        abs(scen.frequencies[0] - targets[0]) <= SIZE_TOL_5
        and abs(scen.frequencies[1] - targets[1]) <= SIZE_TOL_10
    )
    verdict(
        "bootstrap size, long-memory MA",
        ok,
        "rates (%.3f, %.3f) vs references (%.3f, %.3f), %d failed runs"
        % (*scen.frequencies, *targets, scen.n_failed),
    )


def test_bootstrap_power_grows_with_sample_length():
    # time-varying MA alternative at d = 0.2, 5% level, 300 runs per size
    model = ls.builtin_model("tvma-cos", d=0.2)
    powers = {}
    for n_obs, n_window in ((128, 16), (1024, 16)):
        exp = bootstrap_experiment(model, n_obs, n_window, (0.05,), 300)
        powers[n_obs] = ls.run_power_curve(exp).scenarios[0].frequencies[0]
    gain = powers[1024] - powers[128]
    verdict(
        "bootstrap power grows with T",
        gain >= 0.15,
        f"power {powers[128]:.3f} at T=128 vs {powers[1024]:.3f} at T=1024, "
        f"gain {gain:.3f} (>= 0.15)",
    )
