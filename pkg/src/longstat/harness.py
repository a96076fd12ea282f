"""Monte Carlo experiment runner for the stationarity tests.

An :class:`Experiment` pins down everything a size or power study needs:
the data-generating model, a grid of (series length, block width)
scenarios, the test levels, the test method and the master seed.
:func:`run_experiment` plays it out and returns an :class:`McReport`
with per-scenario rejection frequencies and binomial standard errors.

Determinism contract: every run draws from a child random source keyed
by (scenario index, run index, role), and results are aggregated by
integer counts, so a report is bit-identical whether it was computed
serially or on a process pool of any size.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap_distance_draws, order_statistic_index
from .core import GaussianSource, make_block_scheme, normal_quantile
from .errors import DegenerateInputError, InvalidArgumentError, LongstatError
from .estimators import summarize
from .farima import ConstantFn, FarimaSpec, TvFarimaSpec, simulate_farima, simulate_tvfarima
from .farima import DEFAULT_BURN_IN
from .spectral import local_periodogram_matrix

__all__ = [
    "Experiment",
    "McReport",
    "ScenarioResult",
    "STANDARD_SCENARIOS",
    "VarianceCheck",
    "describe_model",
    "run_experiment",
    "run_power_curve",
    "scenario_label",
    "standard_grid",
    "tabulate_reports",
    "variance_ratio_check",
]

SCHEMA_VERSION = 1

# Scenario shorthand used across the size and power studies: the letter
# indexes the series length tier (A=128 up to D=1024), the digit counts
# down the block width from the widest that leaves at least 8 blocks.
STANDARD_SCENARIOS = {
    "A1": (128, 16),
    "A2": (128, 8),
    "B1": (256, 32),
    "B2": (256, 16),
    "B3": (256, 8),
    "C1": (512, 64),
    "C2": (512, 32),
    "C3": (512, 16),
    "C4": (512, 8),
    "D1": (1024, 128),
    "D2": (1024, 64),
    "D3": (1024, 32),
    "D4": (1024, 16),
    "D5": (1024, 8),
}

_LABEL_BY_SHAPE = {shape: label for label, shape in STANDARD_SCENARIOS.items()}


def standard_grid(*labels: str) -> tuple:
    """Map scenario labels like "C2" to (series length, block width) pairs."""
    try:
        return tuple(STANDARD_SCENARIOS[lab] for lab in labels)
    except KeyError as err:
        raise InvalidArgumentError(
            f"unknown scenario label {err.args[0]!r}; known labels: "
            + ", ".join(STANDARD_SCENARIOS)
        ) from None


def scenario_label(n_obs: int, n_window: int) -> str:
    """Conventional label of a scenario, or "T{n}-N{w}" off the grid."""
    return _LABEL_BY_SHAPE.get((n_obs, n_window), f"T{n_obs}-N{n_window}")


@dataclass(frozen=True)
class Experiment:
    """Declarative description of one Monte Carlo study.

    ``bootstrap`` carries the replicate count and order-search cap; its
    ``n_window``, ``alpha`` and ``seed`` fields are ignored here because
    the grid, ``alpha_levels`` and ``seed`` of the experiment take their
    place.  One replicate set per run serves all levels at once.
    """

    model: object
    grid: tuple
    alpha_levels: tuple = (0.05, 0.10)
    n_runs: int = 500
    method: str = "bootstrap"
    bootstrap: BootstrapConfig | None = None
    seed: int = 0
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        if not isinstance(self.model, (FarimaSpec, TvFarimaSpec)):
            raise InvalidArgumentError("model must be a FarimaSpec or TvFarimaSpec")
        grid = tuple((int(t), int(n)) for t, n in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise InvalidArgumentError("experiment grid is empty")
        for t, n in grid:
            if n % 2 or n < 4 or n > t:
                raise InvalidArgumentError(
                    f"scenario (n_obs={t}, n_window={n}) needs an even window "
                    f"width of at least 4 that fits the series"
                )
        alphas = tuple(float(a) for a in self.alpha_levels)
        object.__setattr__(self, "alpha_levels", alphas)
        if not alphas or not all(0.0 < a < 1.0 for a in alphas):
            raise InvalidArgumentError(f"alpha levels must lie in (0, 1), got {alphas}")
        if self.n_runs < 1:
            raise InvalidArgumentError(f"n_runs must be positive, got {self.n_runs}")
        if self.method not in ("asymptotic", "bootstrap"):
            raise InvalidArgumentError(
                f"method must be 'asymptotic' or 'bootstrap', got {self.method!r}"
            )
        if self.burn_in < 0:
            raise InvalidArgumentError(f"burn_in must be non-negative, got {self.burn_in}")

    def replicate_settings(self) -> tuple:
        """(replicate count, order cap) resolved from the template or defaults."""
        if self.bootstrap is not None:
            return self.bootstrap.n_replicates, self.bootstrap.max_order
        return 200, 10


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    """Rejection tallies of one (series length, block width) scenario."""

    label: str
    n_obs: int
    n_window: int
    n_blocks: int
    n_completed: int
    n_failed: int
    failure_kinds: dict
    rejections: tuple
    frequencies: tuple
    std_errors: tuple
    flagged: bool
    compute_seconds: float
    replicates_drawn: int


@dataclass(frozen=True, eq=False)
class McReport:
    """Structured outcome of a Monte Carlo study.

    ``frequencies`` entries are None when every run of a scenario
    failed.  ``wall_seconds`` is elapsed time of the whole study;
    per-scenario ``compute_seconds`` add up worker time and can exceed
    it under parallel execution.
    """

    kind: str
    alpha_levels: tuple
    scenarios: tuple
    experiment: dict
    wall_seconds: float
    n_workers: int

    def to_json_dict(self) -> dict:
        scen = []
        for s in self.scenarios:
            scen.append({
                "label": s.label,
                "n_obs": s.n_obs,
                "n_window": s.n_window,
                "n_blocks": s.n_blocks,
                "n_completed": s.n_completed,
                "n_failed": s.n_failed,
                "failure_kinds": dict(s.failure_kinds),
                "rejections": list(s.rejections),
                "frequencies": [None if f is None else f for f in s.frequencies],
                "std_errors": [None if e is None else e for e in s.std_errors],
                "flagged": s.flagged,
                "compute_seconds": s.compute_seconds,
                "replicates_drawn": s.replicates_drawn,
            })
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "alpha_levels": list(self.alpha_levels),
            "experiment": self.experiment,
            "scenarios": scen,
            "wall_seconds": self.wall_seconds,
            "n_workers": self.n_workers,
        }

    def to_csv_rows(self) -> list:
        """Table rows (header first): one line per scenario."""
        header = ["scenario", "n_obs", "n_window", "n_blocks"]
        for a in self.alpha_levels:
            header += [f"freq@{a:g}", f"se@{a:g}"]
        header += ["n_completed", "n_failed"]
        rows = [header]
        for s in self.scenarios:
            row = [s.label, s.n_obs, s.n_window, s.n_blocks]
            for f, e in zip(s.frequencies, s.std_errors):
                row += ["" if f is None else f"{f:.6g}", "" if e is None else f"{e:.6g}"]
            row += [s.n_completed, s.n_failed]
            rows.append(row)
        return rows


def describe_model(model) -> dict:
    """JSON-friendly echo of a model specification.

    Constant coefficients appear as numbers; time-varying ones as the
    repr of their coefficient function, which for the bundled function
    classes reads back as a constructor call.
    """
    def coeff(fn):
        if isinstance(fn, ConstantFn):
            return fn.value
        return repr(fn)

    if isinstance(model, FarimaSpec):
        return {
            "kind": "farima",
            "d": model.d,
            "ar": list(model.ar),
            "ma": list(model.ma),
            "sigma": model.sigma,
        }
    if isinstance(model, TvFarimaSpec):
        return {
            "kind": "tv-farima",
            "d": coeff(model.d),
            "ar": [coeff(fn) for fn in model.ar],
            "ma": [coeff(fn) for fn in model.ma],
            "sigma": coeff(model.sigma),
        }
    raise InvalidArgumentError(f"cannot describe model of type {type(model).__name__}")


def _experiment_echo(exp: Experiment) -> dict:
    n_replicates, max_order = exp.replicate_settings()
    return {
        "model": describe_model(exp.model),
        "grid": [[t, n] for t, n in exp.grid],
        "alpha_levels": list(exp.alpha_levels),
        "n_runs": exp.n_runs,
        "method": exp.method,
        "bootstrap": (
            {"n_replicates": n_replicates, "max_order": max_order}
            if exp.method == "bootstrap" else None
        ),
        "seed": exp.seed,
        "burn_in": exp.burn_in,
    }


def _simulate(model, n_obs: int, rng: GaussianSource, burn_in: int) -> np.ndarray:
    if isinstance(model, TvFarimaSpec):
        return simulate_tvfarima(model, n_obs, rng, burn_in)
    return simulate_farima(model, n_obs, rng, burn_in)


def _run_chunk(exp: Experiment, scenario_idx: int, run_lo: int, run_hi: int) -> tuple:
    """Execute runs [run_lo, run_hi) of one scenario.

    Returns (scenario_idx, outcomes, seconds, replicates_drawn) where
    each outcome is either a tuple of per-level rejection flags or the
    class name of the error that felled the run.  Module-level so it can
    cross a process-pool boundary.
    """
    n_obs, n_window = exp.grid[scenario_idx]
    n_replicates, max_order = exp.replicate_settings()
    root = GaussianSource(exp.seed)
    quantiles = [normal_quantile(1.0 - a) for a in exp.alpha_levels]
    positions = [order_statistic_index(a, n_replicates) for a in exp.alpha_levels]

    outcomes = []
    replicates_drawn = 0
    t0 = time.perf_counter()
    for r in range(run_lo, run_hi):
        series = _simulate(exp.model, n_obs, root.child(scenario_idx, r, 0), exp.burn_in)
        try:
            if exp.method == "bootstrap":
                draws = bootstrap_distance_draws(
                    series, n_window, n_replicates, max_order,
                    root.child(scenario_idx, r, 1),
                )
                replicates_drawn += n_replicates
                observed = draws.summary.distance_sq
                ordered = np.sort(draws.replicates)
                flags = tuple(bool(observed > ordered[m - 1]) for m in positions)
            else:
                scheme = make_block_scheme(series.size, n_window)
                if scheme.n_blocks < 2:
                    raise InvalidArgumentError("fewer than two blocks")
                summary = summarize(local_periodogram_matrix(series, scheme))
                if summary.quartic_sum <= 0.0:
                    raise DegenerateInputError("flat local periodogram")
                flags = tuple(bool(summary.statistic >= q) for q in quantiles)
            outcomes.append(flags)
        except LongstatError as err:
            outcomes.append(type(err).__name__)
    return scenario_idx, outcomes, time.perf_counter() - t0, replicates_drawn


def _assemble(exp: Experiment, scenario_idx: int, outcomes: list,
              seconds: float, replicates_drawn: int) -> ScenarioResult:
    n_obs, n_window = exp.grid[scenario_idx]
    n_levels = len(exp.alpha_levels)
    rejections = [0] * n_levels
    failure_kinds: dict = {}
    completed = 0
    for outcome in outcomes:
        if isinstance(outcome, str):
            failure_kinds[outcome] = failure_kinds.get(outcome, 0) + 1
            continue
        completed += 1
        for i, flag in enumerate(outcome):
            rejections[i] += flag
    n_failed = len(outcomes) - completed
    if completed:
        freqs = tuple(c / completed for c in rejections)
        ses = tuple(math.sqrt(f * (1.0 - f) / completed) for f in freqs)
    else:
        freqs = tuple(None for _ in range(n_levels))
        ses = tuple(None for _ in range(n_levels))
    return ScenarioResult(
        label=scenario_label(n_obs, n_window),
        n_obs=n_obs,
        n_window=n_window,
        n_blocks=n_obs // n_window,
        n_completed=completed,
        n_failed=n_failed,
        failure_kinds=failure_kinds,
        rejections=tuple(rejections),
        frequencies=freqs,
        std_errors=ses,
        flagged=n_failed > 0.01 * exp.n_runs,
        compute_seconds=seconds,
        replicates_drawn=replicates_drawn,
    )


def run_experiment(exp: Experiment, n_workers: int = 1, progress=None,
                   kind: str = "size") -> McReport:
    """Run a Monte Carlo study and tally rejection frequencies.

    Runs that raise a library error (fit failure, degenerate input) are
    excluded from the denominator and counted per error class; a
    scenario whose failures exceed 1% of runs is flagged.  ``progress``,
    if given, receives short status strings as chunks of runs finish.
    The report is bit-identical for any ``n_workers``.
    """
    if n_workers < 1:
        raise InvalidArgumentError(f"n_workers must be positive, got {n_workers}")
    t0 = time.perf_counter()
    chunk = max(1, math.ceil(exp.n_runs / (8 * n_workers)) if n_workers > 1
                else math.ceil(exp.n_runs / 10))
    tasks = []
    for s in range(len(exp.grid)):
        for lo in range(0, exp.n_runs, chunk):
            tasks.append((s, lo, min(lo + chunk, exp.n_runs)))

    per_scenario: dict = {s: ([], 0.0, 0) for s in range(len(exp.grid))}

    def record(result):
        s, outcomes, seconds, reps = result
        acc, sec, rep = per_scenario[s]
        per_scenario[s] = (acc + [outcomes], sec + seconds, rep + reps)
        if progress is not None:
            done = sum(len(o) for o in per_scenario[s][0])
            progress(f"{scenario_label(*exp.grid[s])}: {done}/{exp.n_runs} runs")

    if n_workers == 1:
        for s, lo, hi in tasks:
            record(_run_chunk(exp, s, lo, hi))
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_run_chunk, exp, s, lo, hi) for s, lo, hi in tasks]
            for fut in futures:
                record(fut.result())

    scenarios = []
    for s in range(len(exp.grid)):
        chunks, seconds, reps = per_scenario[s]
        outcomes = [o for chunk_outcomes in chunks for o in chunk_outcomes]
        scenarios.append(_assemble(exp, s, outcomes, seconds, reps))
    return McReport(
        kind=kind,
        alpha_levels=exp.alpha_levels,
        scenarios=tuple(scenarios),
        experiment=_experiment_echo(exp),
        wall_seconds=time.perf_counter() - t0,
        n_workers=n_workers,
    )


def run_power_curve(exp: Experiment, n_workers: int = 1, progress=None) -> McReport:
    """Rejection frequencies of ``exp`` presented as a power study.

    Identical machinery to :func:`run_experiment`; under an alternative
    model the frequencies read as power, under a null model the call
    reduces to a size study.
    """
    return run_experiment(exp, n_workers=n_workers, progress=progress, kind="power")


def tabulate_reports(labeled_reports) -> list:
    """Merge reports that share a grid into one wide table.

    Produces rows (header first) with one line per scenario and one
    frequency column per (report label, alpha level) pair, the layout
    used for side-by-side parameter studies.
    """
    labeled = list(labeled_reports)
    if not labeled:
        raise InvalidArgumentError("no reports to tabulate")
    base = labeled[0][1]
    key = [(s.label, s.n_obs, s.n_window) for s in base.scenarios]
    for _, rep in labeled[1:]:
        if [(s.label, s.n_obs, s.n_window) for s in rep.scenarios] != key:
            raise InvalidArgumentError("reports cover different scenario grids")
        if rep.alpha_levels != base.alpha_levels:
            raise InvalidArgumentError("reports use different alpha levels")
    header = ["scenario", "n_obs", "n_window", "n_blocks"]
    for label, _ in labeled:
        for a in base.alpha_levels:
            header.append(f"{label}@{a:g}")
    rows = [header]
    for i, s in enumerate(base.scenarios):
        row = [s.label, s.n_obs, s.n_window, s.n_blocks]
        for _, rep in labeled:
            for f in rep.scenarios[i].frequencies:
                row.append("" if f is None else f"{f:.6g}")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class VarianceCheck:
    """Monte Carlo comparison of two estimators of the same integral.

    ``var_riemann`` is the variance of the frequency-sum form of the
    integrated squared local periodogram, ``var_integral`` that of the
    exact-integral form; their limits differ by the factor 15/14, one of
    the places where the Riemann sum over Fourier frequencies is not
    interchangeable with the integral it discretizes.
    """

    ratio: float
    ci_low: float
    ci_high: float
    var_riemann: float
    var_integral: float
    n_reps: int


def variance_ratio_check(n_window: int = 128, n_blocks: int = 8,
                         n_reps: int = 20000, seed: int = 0,
                         n_boot: int = 1000) -> VarianceCheck:
    """Estimate Var(frequency-sum form) / Var(integral form) on white noise.

    Both statistics are computed on the same Gaussian white-noise draws
    of length ``n_window * n_blocks``; the confidence interval is a 95%
    percentile interval over ``n_boot`` resamplings of the replicate
    pairs.  The asymptotic target of the ratio is 15/14.
    """
    if n_reps < 2:
        raise InvalidArgumentError(
            f"variance estimation needs at least two replicates, got {n_reps}"
        )
    from .spectral import integrated_squared_local_periodogram
    from .estimators import sum_sq_local

    n_obs = n_window * n_blocks
    scheme = make_block_scheme(n_obs, n_window)
    src = GaussianSource(seed).child(0)
    riemann = np.empty(n_reps)
    integral = np.empty(n_reps)
    done = 0
    while done < n_reps:
        take = min(2048, n_reps - done)
        block = src.standard_normal((take, n_obs))
        for i in range(take):
            x = block[i]
            riemann[done + i] = sum_sq_local(local_periodogram_matrix(x, scheme))
            integral[done + i] = integrated_squared_local_periodogram(x, scheme)
        done += take

    var_r = float(np.var(riemann, ddof=1))
    var_i = float(np.var(integral, ddof=1))
    ratio = var_r / var_i

    boot_src = GaussianSource(seed).child(1)
    ratios = np.empty(n_boot)
    for b in range(n_boot):
        idx = boot_src.integers(0, n_reps, n_reps)
        ratios[b] = np.var(riemann[idx], ddof=1) / np.var(integral[idx], ddof=1)
    lo, hi = np.percentile(ratios, [2.5, 97.5])
    return VarianceCheck(
        ratio=ratio,
        ci_low=float(lo),
        ci_high=float(hi),
        var_riemann=var_r,
        var_integral=var_i,
        n_reps=n_reps,
    )
