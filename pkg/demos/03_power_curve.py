"""Power against a smoothly varying MA coefficient as T grows.

The alternative is a tvMA(1) with long memory: the lag-one coefficient
follows a cosine composite over rescaled time. Its squared distance from
the best stationary approximation is a fixed positive number, printed
below, so the test must reject with probability growing to one.
"""

import longstat as ls

MODEL = ls.builtin_model("tvma-cos", d=0.2)
RUNS = 60

limit = ls.theoretical_distance_sq(MODEL)
print(f"squared distance from stationarity: {limit.value:.6f}")
print(f"(quadrature error below {limit.error:.1e})")
print()

for label in ("A1", "B2", "C3", "D4"):
    ((n_obs, n_window),) = ls.standard_grid(label)
    exp = ls.Experiment(
        model=MODEL,
        grid=((n_obs, n_window),),
        alpha_levels=(0.05,),
        n_runs=RUNS,
        method="bootstrap",
        bootstrap=ls.BootstrapConfig(n_window=n_window, n_replicates=200),
        seed=2,
    )
    rep = ls.run_power_curve(exp)
    power = rep.scenarios[0].frequencies[0]
    bar = "#" * round(40 * power)
    print(f"T={n_obs:5d}  N={n_window:3d}  power {power:5.2f}  {bar}")

print()
print(f"({RUNS} runs per length; the climb toward 1 is the point, the")
print("third digit is noise at this replication count.)")
