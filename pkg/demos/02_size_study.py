"""Rejection rates under the null: asymptotic versus bootstrap.

Simulates a stationary FARI(1) with d = 0.1 and runs both tests on the
same draws. The normal calibration of the asymptotic test sets in very
slowly under long memory: at these sample sizes it rejects far less
often than nominal, and that conservatism is paid for in power. The
bootstrap tracks the nominal level. 100 runs per cell keeps this quick
(a couple of minutes), so expect Monte Carlo error of about +/- 0.02 on
each rate.
"""

import longstat as ls

MODEL = ls.FarimaSpec(d=0.1, ar=(0.5,))
GRID = ls.standard_grid("B1", "C2")
RUNS = 100

reports = []
for method in ("asymptotic", "bootstrap"):
    exp = ls.Experiment(
        model=MODEL,
        grid=GRID,
        alpha_levels=(0.05, 0.10),
        n_runs=RUNS,
        method=method,
        bootstrap=ls.BootstrapConfig(n_window=GRID[0][1], n_replicates=200),
        seed=1,
    )
    print(f"running {method} ({RUNS} runs per scenario)...")
    reports.append((method, ls.run_experiment(exp)))

print()
for row in ls.tabulate_reports(reports):
    print("  ".join(f"{cell!s:>16}" for cell in row))

print()
print("Nominal levels are 0.05 and 0.10. The asymptotic rates collapse")
print("toward zero: the limiting calibration is still far off at these")
print("T, and a test this conservative forfeits power. Resampling from")
print("the fitted fractional model restores the level.")
