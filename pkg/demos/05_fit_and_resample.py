"""Inside the bootstrap: fit a fractional null, then resample from it.

Simulates a stationary FARIMA(1, 0.25, 0), picks the sieve order by the
information criterion, and prints the fitted parameters. Then draws a
few bootstrap replicates and shows that their distance statistics
scatter around the original series' value, which is what makes the
resampled quantile a usable critical value.
"""

import numpy as np

import longstat as ls

T = 1024
N_WINDOW = 32
TRUTH = ls.FarimaSpec(d=0.25, ar=(0.6,))

x = ls.simulate_farima(TRUTH, T, ls.GaussianSource(4))

order, fits = ls.select_order_aic(x, max_order=6)
print(f"true model: d = {TRUTH.d}, ar = {TRUTH.ar}")
print()
print("order   d-hat   sigma^2   criterion")
for fit in fits:
    marker = "  <- selected" if fit.order == order else ""
    print(f"{fit.order:5d}  {fit.d:6.3f}  {fit.sigma_sq:8.3f}  "
          f"{fit.aic:10.6f}{marker}")

best = fits[order]
print()
print(f"fitted AR coefficients: {np.round(best.ar, 3)}")
print("(the criterion happily trades memory for AR mass near the cap;")
print(" the resampler only needs the implied spectrum, not a clean split)")

draws = ls.bootstrap_distance_draws(x, N_WINDOW, 500, 6, ls.GaussianSource(5))
observed = draws.summary.distance_sq + draws.summary.bias
replicated = np.asarray(draws.replicates)
print()
print(f"bias-corrected distance of the series:   {observed:+.6f}")
print(f"bootstrap replicates (500): mean {replicated.mean():+.6f}, "
      f"sd {replicated.std():.6f}")
print(f"fraction of replicates above the series: "
      f"{(replicated > observed).mean():.3f}")
print()
print("On a stationary series that fraction is roughly uniform over")
print("reruns; a value near zero is exactly the rejection signal the")
print("bootstrap test thresholds at the alpha quantile.")
