"""Why the statistic sums squared ordinates instead of integrating.

The pooled fourth-order term can be computed two ways: a Riemann sum of
squared periodogram ordinates over the frequency grid, or the exact
integral of the squared local periodogram (a quadratic form in the
sample autocovariances). They estimate the same quantity, but not with
the same precision: on white noise the variance of the Riemann form
exceeds the integral form's by a factor approaching 15/14 as the window
width grows. The sum is kept in the statistic because the asymptotic
calibration is derived for it; the check below measures the actual ratio.
"""

import longstat as ls

print(f"asymptotic ratio: 15/14 = {15 / 14:.4f}")
print()
print("window  blocks    ratio        95% CI")
for n_window in (32, 64, 128):
    check = ls.variance_ratio_check(
        n_window=n_window, n_blocks=8, n_reps=5000, seed=3
    )
    print(f"{n_window:6d}  {8:6d}  {check.ratio:7.4f}  "
          f"[{check.ci_low:.4f}, {check.ci_high:.4f}]")

print()
print("(5000 replications per row; the drift toward 15/14 with N is the")
print("finite-width effect the asymptotic value hides.)")
