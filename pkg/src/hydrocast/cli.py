"""Command-line front end: ingest, test, fit, simulate, forecast.

Every command reads UTF-8 CSV/JSON, writes UTF-8 CSV/JSON into an output
directory, and is deterministic given its inputs, flags and seed (outputs
carry no timestamps). Configuration precedence is flags > config file >
defaults, and the effective configuration is echoed into every JSON
output so reported numbers can be replayed.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import bonferroni, diagnose
from .errors import ConfigError, HydrocastError, SizeError
from .estimation import fit as fit_model
from .estimation import model_from_dict
from .forecast import forecast_report
from .series import (
    aggregate_system,
    ingest_csv,
    log_transform,
    read_series_csv,
    slice_period,
    write_series_csv,
)
from .simulate import SimulationConfig, simulate_ensemble, summarize
from .trend import estimate_trend

DEFAULTS = {
    "lambda": 40000.0,
    "gamma": 0.0,
    "rms_tol": 1e-5,
    "fixed_count": None,
    "paths": 10000,
    "seed": 0,
    "multipliers": "0.5:2.6:0.1",
    "periods": None,
    "horizons": "2,4,8,16",
    "max_lag": None,
    "horizon": None,
    "h0": None,
    "max_gap_days": 0,
}


def _parse_date(text: str) -> datetime.date:
    return datetime.date.fromisoformat(text.strip())


def parse_periods(text: str) -> list[tuple[datetime.date, datetime.date]]:
    """Parse 'start:end,start:end,...' into date pairs."""
    out = []
    for chunk in text.split(","):
        try:
            start, end = chunk.split(":")
            out.append((_parse_date(start), _parse_date(end)))
        except ValueError as exc:
            raise ConfigError(
                f"bad period {chunk!r}, expected YYYY-MM-DD:YYYY-MM-DD"
            ) from exc
    return out


def parse_multipliers(text: str) -> np.ndarray:
    """Parse 'start:stop:step' (stop inclusive) into a multiplier grid."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ConfigError(
            f"bad multiplier grid {text!r}, expected start:stop:step"
        ) from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"bad multiplier grid {text!r}")
    n = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(n), 10)


def parse_horizons(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad horizons {text!r}, expected e.g. 2,4,8,16") from exc


def effective_config(args: argparse.Namespace, keys) -> dict:
    """Merge defaults, the config file and the given flags for ``keys``."""
    merged = {k: DEFAULTS[k] for k in keys}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            for key, value in json.load(fh).items():
                if key in merged:
                    merged[key] = value
    for key in keys:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            merged[key] = flag
    return merged


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------------- ingest


def cmd_ingest(args) -> int:
    cfg = effective_config(args, ["max_gap_days"])
    schema = {}
    for field in ("date", "region", "reservoir", "river", "discharge"):
        value = getattr(args, f"col_{field}")
        if value:
            schema[field] = value
    records = []
    for path in args.inputs:
        records.extend(ingest_csv(path, schema or None))
    series = aggregate_system(records, max_gap_days=int(cfg["max_gap_days"]))
    if not args.no_log:
        series = log_transform(series)
    out = _out_dir(args)
    write_series_csv(series, out / "series.csv")
    print(
        f"wrote {out / 'series.csv'}: {len(series)} days "
        f"({series.start_date} .. {series.end_date})"
    )
    return 0


# ------------------------------------------------------------------- test


def _print_report_table(labels, reports, adjusted_p):
    stat_rows = [
        ("Mean", [f"{r.mean:.4f}" for r in reports]),
        ("Standard dev.", [f"{r.std_dev:.4f}" for r in reports]),
        ("ADF level", [f"{r.adf.statistic:.4f} (lag {r.adf.lag})" for r in reports]),
        ("Diff mean", [f"{r.diff_mean:.4f}" for r in reports]),
        ("Diff std dev", [f"{r.diff_std_dev:.4f}" for r in reports]),
        (
            "ADF diff",
            [f"{r.adf_diff.statistic:.4f} (lag {r.adf_diff.lag})" for r in reports],
        ),
        ("Jarque-Bera", [f"{r.jarque_bera.statistic:.4f}" for r in reports]),
        ("JB p-value", [f"{r.jarque_bera.p_value:.4f}" for r in reports]),
        ("Fisher g", [f"{r.g_test.g:.6f}" for r in reports]),
        ("g p-value", [f"{r.g_test.p_value:.6f}" for r in reports]),
        ("g p-value adj.", [f"{p:.6f}" for p in adjusted_p]),
    ]
    for k in range(len(reports[0].vr)):
        stat_rows.append(
            (f"VR({reports[0].vr[k].k})", [f"{r.vr[k].vr:.4f}" for r in reports])
        )
        stat_rows.append(
            (
                f"VR({reports[0].vr[k].k}) z rob.",
                [f"{r.vr[k].z_robust:.4f}" for r in reports],
            )
        )
    width = max(len(name) for name, _ in stat_rows)
    col = max(
        [len(lab) for lab in labels]
        + [len(cell) for _, cells in stat_rows for cell in cells]
    )
    print(" " * width + "  " + "  ".join(lab.rjust(col) for lab in labels))
    for name, cells in stat_rows:
        print(name.ljust(width) + "  " + "  ".join(c.rjust(col) for c in cells))


def cmd_test(args) -> int:
    cfg = effective_config(args, ["periods", "horizons", "max_lag"])
    series = read_series_csv(args.series, label="series")
    horizons = parse_horizons(cfg["horizons"])
    if cfg["periods"]:
        period_bounds = parse_periods(cfg["periods"])
        slices = [
            (f"{s.isoformat()}:{e.isoformat()}", slice_period(series, s, e))
            for s, e in period_bounds
        ]
    else:
        slices = [
            (f"{series.start_date.isoformat()}:{series.end_date.isoformat()}", series)
        ]
    max_lag = None if cfg["max_lag"] is None else int(cfg["max_lag"])
    reports = [
        diagnose(sl, horizons=horizons, max_lag=max_lag, label=lab)
        for lab, sl in slices
    ]
    adjusted = bonferroni([r.g_test.p_value for r in reports])
    doc = {
        "config": cfg,
        "periods": [
            {
                "label": r.label,
                "g_p_value_adjusted": adjusted[i],
                "tests": r.to_records(),
            }
            for i, r in enumerate(reports)
        ],
    }
    out = _out_dir(args)
    _write_json(out / "report.json", doc)
    _print_report_table([lab for lab, _ in slices], reports, adjusted)
    print(f"wrote {out / 'report.json'}")
    return 0


# -------------------------------------------------------------------- fit


def cmd_fit(args) -> int:
    cfg = effective_config(args, ["lambda", "gamma", "rms_tol", "fixed_count"])
    series = read_series_csv(args.series, label="series")
    if args.period:
        start, end = parse_periods(args.period)[0]
        series = slice_period(series, start, end)
    fixed_count = None if cfg["fixed_count"] is None else int(cfg["fixed_count"])
    result = fit_model(
        series,
        lam=float(cfg["lambda"]),
        gamma=float(cfg["gamma"]),
        rms_tol=float(cfg["rms_tol"]),
        fixed_count=fixed_count,
    )
    out = _out_dir(args)
    doc = result.to_dict()
    doc["config"] = cfg
    doc["period"] = {
        "start": series.start_date.isoformat(),
        "end": series.end_date.isoformat(),
    }
    _write_json(out / "fit.json", doc)
    _write_rows(
        out / "harmonics.csv",
        ["k", "a", "phi"],
        [(k, _fmt(a), _fmt(phi)) for k, a, phi in result.harmonics.terms],
    )
    if args.dump_rms:
        _write_rows(
            out / "rms.csv",
            ["L", "rms"],
            [(l, _fmt(r)) for l, r in result.rms_trace],
        )
    if args.dump_trend:
        trend = estimate_trend(series, float(cfg["lambda"]))
        dates = series.dates()
        _write_rows(
            out / "trend.csv",
            ["index", "date", "value", "trend", "trend_derivative"],
            [
                (
                    i,
                    dates[i].isoformat(),
                    _fmt(series.values[i]),
                    _fmt(trend.m[i]),
                    _fmt(trend.m_dot[i]),
                )
                for i in range(len(series))
            ],
        )
    print(
        f"wrote {out / 'fit.json'}: alpha={result.phase2.alpha:.4f} "
        f"sigma={result.phase2.sigma:.4f} "
        f"terms={len(result.harmonics.terms)}"
    )
    return 0


# --------------------------------------------------------- simulate/forecast


def _load_fit(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    model, params, sigma_H, h_last = model_from_dict(doc)
    period = doc.get("period")
    end_date = _parse_date(period["end"]) if period else None
    return doc, model, params, sigma_H, h_last, end_date


def _step_dates(end_date, n) -> list[str]:
    if end_date is None:
        return [""] * n
    one_day = datetime.timedelta(days=1)
    return [(end_date + i * one_day).isoformat() for i in range(n)]


def _run_ensemble(args, cfg, model, params, h_last):
    horizon = cfg["horizon"]
    n_steps = model.n_samples if horizon is None else int(horizon)
    h0 = h_last if cfg["h0"] is None else float(cfg["h0"])
    sim_config = SimulationConfig(
        n_steps=n_steps, h0=h0, n_paths=int(cfg["paths"]), seed=int(cfg["seed"])
    )
    return simulate_ensemble(model, params, sim_config)


def cmd_simulate(args) -> int:
    cfg = effective_config(args, ["paths", "seed", "horizon", "h0"])
    _doc, model, params, _sigma_H, h_last, end_date = _load_fit(args.fit)
    ensemble = _run_ensemble(args, cfg, model, params, h_last)
    summary = summarize(ensemble)
    n = ensemble.paths.shape[1]
    dates = _step_dates(end_date, n)
    out = _out_dir(args)
    _write_rows(
        out / "ensemble.csv",
        ["step", "date", "mean", "min", "max", "q05", "q95"],
        [
            (
                i,
                dates[i],
                _fmt(summary["mean"][i]),
                _fmt(summary["min"][i]),
                _fmt(summary["max"][i]),
                _fmt(summary["q05"][i]),
                _fmt(summary["q95"][i]),
            )
            for i in range(n)
        ],
    )
    if args.dump_paths:
        np.save(out / "paths.npy", ensemble.paths)
    print(f"wrote {out / 'ensemble.csv'}: {ensemble.paths.shape[0]} paths x {n} steps")
    return 0


def cmd_forecast(args) -> int:
    cfg = effective_config(
        args, ["paths", "seed", "horizon", "h0", "multipliers"]
    )
    doc, model, params, _sigma_H, h_last, end_date = _load_fit(args.fit)
    ensemble = _run_ensemble(args, cfg, model, params, h_last)
    horizon = ensemble.paths.shape[1]

    holdout = None
    if args.holdout:
        holdout = read_series_csv(args.holdout, label="holdout")
        if end_date is not None and holdout.start_date <= end_date <= holdout.end_date:
            last_needed = end_date + datetime.timedelta(days=horizon - 1)
            if holdout.end_date < last_needed:
                raise SizeError(
                    f"holdout ends {holdout.end_date}, but the forecast "
                    f"horizon of {horizon} steps needs data through {last_needed}"
                )
            holdout = slice_period(holdout, end_date, last_needed)
        elif len(holdout) != horizon:
            raise SizeError(
                f"holdout has {len(holdout)} points but the forecast horizon "
                f"is {horizon}"
            )

    fit_view = _FitView(doc)
    report = forecast_report(
        fit_view, ensemble, holdout=holdout,
        multipliers=parse_multipliers(cfg["multipliers"]),
    )

    out = _out_dir(args)
    dates = _step_dates(end_date, horizon)
    _write_rows(
        out / "envelope.csv",
        ["step", "date", "lower", "upper"],
        [
            (i, dates[i], _fmt(report.envelope_lower[i]), _fmt(report.envelope_upper[i]))
            for i in range(horizon)
        ],
    )
    band_header = ["step", "date", "center"]
    for m in report.bands.multipliers:
        band_header += [f"lower_{m:g}", f"upper_{m:g}"]
    band_rows = []
    for i in range(horizon):
        row = [i, dates[i], _fmt(report.bands.center[i])]
        for j in range(report.bands.multipliers.size):
            row += [_fmt(report.bands.lower[j, i]), _fmt(report.bands.upper[j, i])]
        band_rows.append(row)
    _write_rows(out / "bands.csv", band_header, band_rows)

    cov_rows = []
    if report.coverage.holdout is None:
        cov_header = ["multiplier", "forecast_pct"]
        for mult, fc, _h, _d in report.coverage.rows():
            cov_rows.append((f"{mult:g}", f"{100.0 * fc:.2f}"))
    else:
        cov_header = ["multiplier", "forecast_pct", "holdout_pct", "difference_pct"]
        for mult, fc, ho, diff in report.coverage.rows():
            cov_rows.append(
                (f"{mult:g}", f"{100.0 * fc:.2f}", f"{100.0 * ho:.2f}", f"{100.0 * diff:.2f}")
            )
    _write_rows(out / "coverage.csv", cov_header, cov_rows)

    _write_json(
        out / "forecast.json",
        {
            "config": cfg,
            "sigma_H": report.bands.sigma_H,
            "horizon": horizon,
            "coverage": [
                {
                    "multiplier": mult,
                    "forecast": fc,
                    "holdout": ho,
                    "difference": diff,
                }
                for mult, fc, ho, diff in report.coverage.rows()
            ],
        },
    )
    print(
        f"wrote {out / 'coverage.csv'} "
        f"({report.bands.multipliers.size} multipliers, horizon {horizon})"
    )
    return 0


class _FitView:
    """Duck-typed stand-in for ModelFit when loading a fit from JSON."""

    def __init__(self, doc: dict):
        self.harmonics, self.phase2, self.sigma_H, self.h_last = model_from_dict(doc)


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrocast",
        description="Estimate, diagnose, simulate and forecast periodic "
        "mean-reversion series.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=".", help="directory for outputs")
    common.add_argument("--config", help="JSON config file (flags take precedence)")

    p = sub.add_parser("ingest", parents=[common], help="aggregate raw river CSVs")
    p.add_argument("inputs", nargs="+", help="per-river discharge CSV files")
    p.add_argument("--no-log", action="store_true", help="skip the log transform")
    p.add_argument("--max-gap-days", type=int, dest="max_gap_days",
                   help="interpolate gaps up to this many days (default: fail)")
    for field in ("date", "region", "reservoir", "river", "discharge"):
        p.add_argument(f"--col-{field}", dest=f"col_{field}",
                       help=f"column holding the {field} field")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("test", parents=[common], help="run the diagnostic battery")
    p.add_argument("series", help="series CSV (date,value)")
    p.add_argument("--periods", help="comma-separated start:end date pairs")
    p.add_argument("--horizons", help="variance-ratio horizons, e.g. 2,4,8,16")
    p.add_argument("--max-lag", type=int, dest="max_lag", help="ADF max lag")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("fit", parents=[common], help="fit one fundamental period")
    p.add_argument("series", help="series CSV (date,value)")
    p.add_argument("--period", help="start:end dates of the period to fit")
    p.add_argument("--lambda", type=float, dest="lambda", help="HP smoothing parameter")
    p.add_argument("--gamma", type=float, help="variance elasticity")
    p.add_argument("--rms-tol", type=float, dest="rms_tol",
                   help="harmonic truncation tolerance")
    p.add_argument("--fixed-count", type=int, dest="fixed_count",
                   help="keep exactly this many oscillatory harmonics")
    p.add_argument("--dump-rms", action="store_true", help="also write rms.csv")
    p.add_argument("--dump-trend", action="store_true",
                   help="also write the fitted-period trend (trend.csv)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", parents=[common], help="simulate an ensemble")
    p.add_argument("fit", help="fit JSON produced by the fit command")
    p.add_argument("--horizon", type=int, help="steps to simulate (default: one period)")
    p.add_argument("--paths", type=int, help="number of paths (even)")
    p.add_argument("--seed", type=int, help="root seed for all randomness")
    p.add_argument("--h0", type=float, help="start level (default: last observation)")
    p.add_argument("--dump-paths", action="store_true",
                   help="also write the full path matrix (paths.npy)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("forecast", parents=[common],
                       help="simulate and build forecast bands")
    p.add_argument("fit", help="fit JSON produced by the fit command")
    p.add_argument("--horizon", type=int, help="steps to simulate (default: one period)")
    p.add_argument("--paths", type=int, help="number of paths (even)")
    p.add_argument("--seed", type=int, help="root seed for all randomness")
    p.add_argument("--h0", type=float, help="start level (default: last observation)")
    p.add_argument("--holdout", help="held-out series CSV to score against the bands")
    p.add_argument("--multipliers", help="band grid start:stop:step")
    p.set_defaults(func=cmd_forecast)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HydrocastError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
