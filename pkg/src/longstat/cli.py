"""Command-line interface.

Five subcommands: ``test`` runs a stationarity test on a CSV series,
``simulate`` draws from a model, ``experiment`` and ``power`` replay
Monte Carlo studies from declarative JSON configs, and
``variance-check`` estimates the variance ratio between the
frequency-sum and exact-integral forms of the integrated squared local
periodogram.

Exit codes: 0 the command ran (test decisions live in the JSON report,
not the exit code), 1 usage or data errors, 3 internal numerical
failures.  All commands honor ``--seed``; rerunning with the same
arguments reproduces every output bit for bit.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap_test
from .core import GaussianSource
from .errors import (
    DegenerateInputError,
    DomainError,
    FitFailureError,
    InvalidArgumentError,
)
from .estimators import TestResult, asymptotic_test
from .farima import (
    ConstantFn,
    CosComposite,
    FarimaSpec,
    SineWave,
    SqrtSine,
    TvFarimaSpec,
    builtin_model,
    simulate_farima,
    simulate_tvfarima,
    DEFAULT_BURN_IN,
)
from .harness import (
    Experiment,
    describe_model,
    run_experiment,
    run_power_curve,
    standard_grid,
    tabulate_reports,
    variance_ratio_check,
)
from .whittle import fit_whittle

SCHEMA_VERSION = 1
_THREADS_ENV = "LONGSTAT_THREADS"


class _UsageError(Exception):
    """Bad arguments, bad files, bad config: everything that exits 1."""


# ----------------------------------------------------------------------
# small I/O helpers

def _read_series_csv(path: str) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as err:
        raise _UsageError(f"cannot read {path}: {err}") from None
    values = []
    first_content_line = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        entry = raw.strip()
        if not entry:
            continue
        try:
            value = float(entry)
        except ValueError:
            if first_content_line:
                # a single non-numeric header line is allowed
                first_content_line = False
                continue
            raise _UsageError(
                f"{path}: line {lineno}: expected a number, got {entry!r}"
            ) from None
        first_content_line = False
        values.append(value)
    if len(values) < 2:
        raise _UsageError(f"{path}: expected a numeric column with at least 2 values")
    return np.asarray(values)


def _write_series_csv(values: np.ndarray, path: str | None):
    lines = "".join(f"{v:.17g}\n" for v in values)
    if path is None:
        sys.stdout.write(lines)
    else:
        Path(path).write_text(lines)


def _write_json(doc: dict, path: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_csv_rows(rows, path: str):
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def _default_threads() -> int:
    raw = os.environ.get(_THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ----------------------------------------------------------------------
# model configuration parsing

_FN_KWARGS = {
    "const": {"value"},
    "sine-wave": {"amplitude", "cycles"},
    "cos-composite": {"amplitude", "phase", "cycles"},
    "sqrt-sine": set(),
}
_FN_CLASSES = {
    "const": ConstantFn,
    "sine-wave": SineWave,
    "cos-composite": CosComposite,
    "sqrt-sine": SqrtSine,
}


def _parse_coeff(obj, errors: list, where: str):
    """A coefficient is a number or {"fn": name, **kwargs}."""
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return float(obj)
    if not isinstance(obj, dict):
        errors.append(f"{where}: expected a number or a function object, got {obj!r}")
        return 0.0
    name = obj.get("fn")
    if name not in _FN_CLASSES:
        errors.append(
            f"{where}: unknown function {name!r}; available: " + ", ".join(_FN_CLASSES)
        )
        return 0.0
    kwargs = {k: v for k, v in obj.items() if k != "fn"}
    unknown = set(kwargs) - _FN_KWARGS[name]
    if unknown:
        errors.append(f"{where}: unknown parameters for {name!r}: {sorted(unknown)}")
        return 0.0
    bad = [k for k, v in kwargs.items()
           if not isinstance(v, (int, float)) or isinstance(v, bool)]
    if bad:
        errors.append(f"{where}: non-numeric parameters: {sorted(bad)}")
        return 0.0
    try:
        return _FN_CLASSES[name](**{k: float(v) for k, v in kwargs.items()})
    except TypeError as err:
        errors.append(f"{where}: {err}")
        return 0.0


def _parse_model(obj, errors: list, where: str = "model"):
    if not isinstance(obj, dict):
        errors.append(f"{where}: expected an object")
        return None
    if "builtin" in obj:
        unknown = set(obj) - {"builtin", "d"}
        if unknown:
            errors.append(f"{where}: unknown keys next to 'builtin': {sorted(unknown)}")
            return None
        try:
            d = obj.get("d", 0.2)
            if not isinstance(d, (int, float)) or isinstance(d, bool):
                raise InvalidArgumentError(f"{where}.d must be a number")
            return builtin_model(str(obj["builtin"]), d=float(d))
        except InvalidArgumentError as err:
            errors.append(f"{where}: {err}")
            return None
    unknown = set(obj) - {"d", "ar", "ma", "sigma"}
    if unknown:
        errors.append(f"{where}: unknown keys: {sorted(unknown)}")
        return None
    d = _parse_coeff(obj.get("d", 0.0), errors, f"{where}.d")
    sigma = _parse_coeff(obj.get("sigma", 1.0), errors, f"{where}.sigma")
    ar_raw = obj.get("ar", [])
    ma_raw = obj.get("ma", [])
    if not isinstance(ar_raw, list) or not isinstance(ma_raw, list):
        errors.append(f"{where}: 'ar' and 'ma' must be arrays")
        return None
    ar = tuple(_parse_coeff(c, errors, f"{where}.ar[{i}]") for i, c in enumerate(ar_raw))
    ma = tuple(_parse_coeff(c, errors, f"{where}.ma[{i}]") for i, c in enumerate(ma_raw))
    if errors:
        return None
    entries = (d, sigma) + ar + ma
    try:
        if all(isinstance(e, float) for e in entries):
            return FarimaSpec(d=d, ar=ar, ma=ma, sigma=sigma)
        return TvFarimaSpec(d=d, ar=ar, ma=ma, sigma=sigma)
    except InvalidArgumentError as err:
        errors.append(f"{where}: {err}")
        return None


def _parse_scenarios(obj, errors: list):
    if not isinstance(obj, list) or not obj:
        errors.append("scenarios: expected a non-empty array of labels or [n_obs, n_window] pairs")
        return ()
    grid = []
    for i, entry in enumerate(obj):
        if isinstance(entry, str):
            try:
                grid.extend(standard_grid(entry))
            except InvalidArgumentError as err:
                errors.append(f"scenarios[{i}]: {err}")
        elif (isinstance(entry, list) and len(entry) == 2
              and all(isinstance(v, int) and not isinstance(v, bool) for v in entry)):
            grid.append((entry[0], entry[1]))
        else:
            errors.append(f"scenarios[{i}]: expected a label or [n_obs, n_window], got {entry!r}")
    return tuple(grid)


_EXPERIMENT_KEYS = {
    "model", "models", "scenarios", "alpha_levels", "n_runs", "method",
    "bootstrap", "seed", "burn_in", "out_prefix",
}


def _load_experiment_config(path: str):
    """Parse and validate an experiment config, collecting all violations."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as err:
        raise _UsageError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise _UsageError(f"{path}: invalid JSON: {err}") from None
    if not isinstance(raw, dict):
        raise _UsageError(f"{path}: top level must be an object")

    errors: list = []
    unknown = set(raw) - _EXPERIMENT_KEYS
    if unknown:
        errors.append(f"unknown keys: {sorted(unknown)}")

    models = []
    if "models" in raw and "model" in raw:
        errors.append("give either 'model' or 'models', not both")
    elif "models" in raw:
        if not isinstance(raw["models"], list) or not raw["models"]:
            errors.append("models: expected a non-empty array")
        else:
            for i, entry in enumerate(raw["models"]):
                if not isinstance(entry, dict) or set(entry) != {"label", "model"}:
                    errors.append(f"models[{i}]: expected {{'label', 'model'}}")
                    continue
                spec = _parse_model(entry["model"], errors, f"models[{i}].model")
                if spec is not None:
                    models.append((str(entry["label"]), spec))
    elif "model" in raw:
        spec = _parse_model(raw["model"], errors)
        if spec is not None:
            models.append(("model", spec))
    else:
        errors.append("missing 'model' or 'models'")

    grid = _parse_scenarios(raw.get("scenarios"), errors)

    alphas = raw.get("alpha_levels", [0.05, 0.10])
    if (not isinstance(alphas, list) or not alphas
            or not all(isinstance(a, (int, float)) and not isinstance(a, bool) for a in alphas)):
        errors.append("alpha_levels: expected a non-empty array of numbers")
        alphas = [0.05]

    def _int_field(key, default, minimum):
        v = raw.get(key, default)
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            errors.append(f"{key}: expected an integer >= {minimum}, got {v!r}")
            return default
        return v

    n_runs = _int_field("n_runs", 500, 1)
    seed = _int_field("seed", 0, -(2**63))
    burn_in = _int_field("burn_in", DEFAULT_BURN_IN, 0)

    method = raw.get("method", "bootstrap")
    if method not in ("asymptotic", "bootstrap"):
        errors.append(f"method: expected 'asymptotic' or 'bootstrap', got {method!r}")
        method = "bootstrap"

    boot_raw = raw.get("bootstrap", {})
    n_replicates, max_order = 200, 10
    if not isinstance(boot_raw, dict):
        errors.append("bootstrap: expected an object")
    else:
        unknown = set(boot_raw) - {"n_replicates", "max_order"}
        if unknown:
            errors.append(f"bootstrap: unknown keys: {sorted(unknown)}")
        if "n_replicates" in boot_raw:
            v = boot_raw["n_replicates"]
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                errors.append(f"bootstrap.n_replicates: expected a positive integer, got {v!r}")
            else:
                n_replicates = v
        if "max_order" in boot_raw:
            v = boot_raw["max_order"]
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                errors.append(f"bootstrap.max_order: expected a non-negative integer, got {v!r}")
            else:
                max_order = v

    out_prefix = raw.get("out_prefix")
    if out_prefix is not None and not isinstance(out_prefix, str):
        errors.append(f"out_prefix: expected a string, got {out_prefix!r}")

    if errors:
        raise _UsageError(f"{path}: invalid config:\n  " + "\n  ".join(errors))

    experiments = []
    for label, spec in models:
        template = BootstrapConfig(
            n_window=grid[0][1], n_replicates=n_replicates, max_order=max_order
        ) if method == "bootstrap" else None
        try:
            experiments.append((label, Experiment(
                model=spec,
                grid=grid,
                alpha_levels=tuple(float(a) for a in alphas),
                n_runs=n_runs,
                method=method,
                bootstrap=template,
                seed=seed,
                burn_in=burn_in,
            )))
        except InvalidArgumentError as err:
            raise _UsageError(f"{path}: invalid config:\n  {err}") from None
    return experiments, out_prefix


# ----------------------------------------------------------------------
# subcommands

def _test_report(result: TestResult, n_obs: int, fit_doc, warnings: list) -> dict:
    s = result.summary
    scheme = s.scheme
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "test",
        "method": result.method,
        "alpha": result.alpha,
        "statistic": result.statistic,
        "threshold": result.threshold,
        "reject": result.reject,
        "series": {
            "n_obs": n_obs,
            "n_used": scheme.n_used,
            "n_window": scheme.n_window,
            "n_blocks": scheme.n_blocks,
            "n_discarded": scheme.n_discarded,
        },
        "estimates": {
            "sum_sq_local": s.sum_sq_local,
            "sum_sq_pooled": s.sum_sq_pooled,
            "distance_sq": s.distance_sq,
            "bias_correction": s.bias,
            "quartic_sum": s.quartic_sum,
            "standardized_statistic": None if math.isnan(s.statistic) else s.statistic,
        },
        "fit": fit_doc,
        "warnings": warnings,
    }


def _memory_warnings(d: float, method: str) -> list:
    warnings = []
    if method == "asymptotic" and d >= 0.125:
        warnings.append(
            f"estimated memory parameter {d:.3f} >= 0.125: the normal approximation "
            "loses accuracy under strong memory; prefer --method bootstrap"
        )
    if d >= 0.25:
        warnings.append(
            f"estimated memory parameter {d:.3f} >= 0.25: the squared distance from "
            "stationarity may not be finite and neither test is dependable"
        )
    return warnings


def cmd_test(args) -> int:
    series = _read_series_csv(args.csv)
    if args.method == "asymptotic":
        result = asymptotic_test(series, args.n_window, args.alpha)
        try:
            fit = fit_whittle(series, 0)
            fit_doc = {
                "order": 0, "d": fit.d, "ar": [], "sigma_sq": fit.sigma_sq,
                "converged": fit.converged,
            }
            warnings = _memory_warnings(fit.d, "asymptotic")
        except (InvalidArgumentError, FitFailureError):
            fit_doc, warnings = None, []
    else:
        config = BootstrapConfig(
            n_window=args.n_window,
            n_replicates=args.replicates,
            alpha=args.alpha,
            max_order=args.max_order,
            seed=args.seed,
        )
        result = bootstrap_test(series, config)
        diag = result.diagnostics
        fit_doc = {
            "order": diag["order"], "d": diag["d"], "ar": list(diag["ar"]),
            "sigma_sq": diag["sigma_sq"], "converged": diag["converged"],
        }
        warnings = _memory_warnings(diag["d"], "bootstrap")
    _write_json(_test_report(result, series.size, fit_doc, warnings), args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except OSError as err:
            raise _UsageError(f"cannot read {args.config}: {err}") from None
        except json.JSONDecodeError as err:
            raise _UsageError(f"{args.config}: invalid JSON: {err}") from None
        if not isinstance(raw, dict) or set(raw) - {"model"}:
            raise _UsageError(f"{args.config}: expected an object with a single 'model' key")
        errors: list = []
        spec = _parse_model(raw.get("model"), errors)
        if errors or spec is None:
            raise _UsageError(f"{args.config}: invalid model:\n  " + "\n  ".join(errors))
    elif args.model is not None:
        spec = builtin_model(args.model, d=args.d if args.d is not None else 0.2)
    else:
        spec = FarimaSpec(
            d=args.d if args.d is not None else 0.0,
            ar=tuple(args.ar or ()),
            ma=tuple(args.ma or ()),
            sigma=args.sigma,
        )
    rng = GaussianSource(args.seed)
    if isinstance(spec, TvFarimaSpec):
        series = simulate_tvfarima(spec, args.t, rng, args.burn_in)
    else:
        series = simulate_farima(spec, args.t, rng, args.burn_in)
    _write_series_csv(series, args.out)
    if args.out is not None:
        echo = {
            "schema_version": SCHEMA_VERSION,
            "command": "simulate",
            "model": describe_model(spec),
            "n_obs": args.t,
            "seed": args.seed,
            "burn_in": args.burn_in,
        }
        _write_json(echo, args.out + ".config.json")
    return 0


def _run_configured(args, runner, kind: str) -> int:
    experiments, out_prefix = _load_experiment_config(args.config)
    if args.out_prefix is not None:
        out_prefix = args.out_prefix
    if out_prefix is None:
        raise _UsageError("no output prefix: set 'out_prefix' in the config or pass --out-prefix")

    def progress(msg):
        print(msg, file=sys.stderr)

    reports = []
    for label, exp in experiments:
        if len(experiments) > 1:
            print(f"running model {label!r}", file=sys.stderr)
        reports.append((label, runner(exp, n_workers=args.threads, progress=progress)))

    json_path = out_prefix + ".json"
    csv_path = out_prefix + ".csv"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": kind,
        "reports": [dict(label=label, **rep.to_json_dict()) for label, rep in reports],
    }
    _write_json(doc, json_path)
    if kind == "power":
        base = reports[0][1]
        header = ["scenario", "n_obs", "n_window"]
        header += [f"power[{label}]" for label, _ in reports]
        rows = [header]
        for i, s in enumerate(base.scenarios):
            row = [s.label, s.n_obs, s.n_window]
            for _, rep in reports:
                f = rep.scenarios[i].frequencies[0]
                row.append("" if f is None else f"{f:.6g}")
            rows.append(row)
    elif len(reports) > 1:
        rows = tabulate_reports(reports)
    else:
        rows = reports[0][1].to_csv_rows()
    _write_csv_rows(rows, csv_path)
    print(json_path)
    print(csv_path)
    return 0


def cmd_experiment(args) -> int:
    return _run_configured(args, run_experiment, "experiment")


def cmd_power(args) -> int:
    return _run_configured(args, run_power_curve, "power")


def cmd_variance_check(args) -> int:
    check = variance_ratio_check(
        n_window=args.n_window,
        n_blocks=args.n_blocks,
        n_reps=args.n_reps,
        seed=args.seed,
    )
    _write_json({
        "schema_version": SCHEMA_VERSION,
        "command": "variance-check",
        "ratio": check.ratio,
        "ci95": [check.ci_low, check.ci_high],
        "var_riemann": check.var_riemann,
        "var_integral": check.var_integral,
        "n_reps": check.n_reps,
        "asymptotic_target": 15.0 / 14.0,
    }, args.out)
    return 0


# ----------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longstat",
        description="Stationarity tests for long-memory time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test a CSV series for second-order stationarity")
    p.add_argument("csv", help="single numeric column, optional header line")
    p.add_argument("--n-window", "-n", type=int, required=True,
                   help="block width for the local periodogram (even)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", choices=("asymptotic", "bootstrap"), default="asymptotic")
    p.add_argument("--replicates", "-b", type=int, default=200,
                   help="bootstrap replicates (bootstrap method)")
    p.add_argument("--max-order", type=int, default=10,
                   help="cap of the AR order search (bootstrap method)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="draw one series from a model")
    p.add_argument("--t", "-t", type=int, required=True, help="series length")
    p.add_argument("--model", choices=("tvma-cos", "tvar-sin", "sigma-sin"),
                   help="builtin time-varying model")
    p.add_argument("--config", help="JSON file with a 'model' object")
    p.add_argument("--d", type=float, help="memory parameter (constant models)")
    p.add_argument("--ar", type=float, nargs="*", help="AR coefficients (constant model)")
    p.add_argument("--ma", type=float, nargs="*", help="MA coefficients (constant model)")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the CSV here (plus a .config.json echo)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="run a Monte Carlo size study from a config")
    p.add_argument("config", help="JSON experiment description")
    p.add_argument("--out-prefix", help="override the config's out_prefix")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help=f"worker processes (default ${_THREADS_ENV} or 1); "
                        "does not affect results")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("power", help="run a Monte Carlo power study from a config")
    p.add_argument("config", help="JSON experiment description")
    p.add_argument("--out-prefix", help="override the config's out_prefix")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("variance-check",
                       help="variance ratio of the two integrated squared "
                            "periodogram forms on white noise")
    p.add_argument("--n-window", type=int, default=128)
    p.add_argument("--n-blocks", type=int, default=8)
    p.add_argument("--n-reps", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_variance_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code in (0, None) else 1
    try:
        return args.func(args)
    except (_UsageError, InvalidArgumentError, DegenerateInputError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (FitFailureError, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
