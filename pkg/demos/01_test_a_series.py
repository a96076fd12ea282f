"""Test two simulated series for second-order stationarity.

The first series is a stationary FARIMA(1, 0.2, 0): long memory, but the
covariance structure never changes, so both tests should keep the null.
The second modulates the innovation scale over the observation window,
which neither differencing nor any stationary model can absorb, and both
tests should reject it.
"""

import longstat as ls

T = 2048
N_WINDOW = 32

rng = ls.GaussianSource(7)

stationary = ls.simulate_farima(ls.FarimaSpec(d=0.2, ar=(0.4,)), T, rng.child(0))

# same long-memory level, but the scale sweeps through a sine arch
modulated_spec = ls.TvFarimaSpec(d=0.2, sigma=ls.SqrtSine(), ar=(0.4,))
modulated = ls.simulate_tvfarima(modulated_spec, T, rng.child(1))

for label, series in (("stationary", stationary), ("scale-modulated", modulated)):
    print(f"--- {label} series, T={T} ---")
    asym = ls.asymptotic_test(series, N_WINDOW, alpha=0.05)
    print(f"  asymptotic: statistic {asym.statistic:+.3f}, "
          f"threshold {asym.threshold:.3f}, reject={asym.reject}")

    config = ls.BootstrapConfig(n_window=N_WINDOW, n_replicates=200, seed=0)
    boot = ls.bootstrap_test(series, config)
    diag = boot.diagnostics
    print(f"  bootstrap:  statistic {boot.statistic:+.3f}, "
          f"threshold {boot.threshold:.3f}, reject={boot.reject}")
    print(f"              fitted null: order {diag['order']}, "
          f"d = {diag['d']:.3f}, sigma^2 = {diag['sigma_sq']:.3f}")
    print()

print("Under long memory the asymptotic threshold is unreliable (the")
print("normal approximation sets in very slowly), which is why the")
print("bootstrap decision is the one to trust at this sample size.")
