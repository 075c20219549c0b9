"""Command-line laboratory driver.

Grammar::

    ssfmlab <command> --config <file> [--seed N] [--out DIR] [--threads N]
            [--preset NAME] [--svg] [key=value ...]

Commands: ``air-sweep``, ``scatter``, ``mk-pdf``, ``offdiag-decay``,
``haar-ks``, ``upsilon``, ``bounds-table``.

Parameter resolution, lowest to highest precedence: the command's default
preset, ``--preset NAME``, the ``--config`` JSON file, then ``key=value``
overrides; ``--seed`` always wins.  Keys that name a channel-configuration
field route into the ``config`` block; all other keys are command parameters.

Each run writes ``<out>/<command>.csv`` (first line ``#schema=<name>/<ver>``,
UTF-8, ``.`` decimal separator, floats at 17 significant digits) and
``<out>/<command>.meta.json`` (resolved parameters, seed, versions, timing).
CSV bodies are byte-identical across reruns with the same resolved parameters
and seed — timestamps live only in the metadata file.  Per-point failures are
recorded in the trailing ``error`` column instead of aborting the run.

Configs declare ``units``: ``"normalized"`` values feed the channel directly;
``"fiber"`` values use km / ps / dBm / dB/km / 1/(W km) / ps^2/km / W/km at
the boundary and are converted to SI exactly once here, at parse time.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bounds import (
    bounds_table,
    lower_bound_asymptotic,
    prelog_r,
    upper_bound,
    upsilon_theory,
)
from .fading import sample_MK
from .info import air_sweep, scatter_capture
from .matrixlab import (
    convergence_rate_upsilon,
    haar_entry_marginal_cdf,
    haar_entry_marginal_pdf,
    haar_unitary,
    ks_statistic,
    ks_two_sample,
    offdiag_decay_fit,
)
from .presets import air_segment_rule, get_preset
from .rng import RngStream
from .spectral import ChannelConfig, fixed_profile
from . import svgplot

SCHEMA_VERSION = 1
_CONFIG_KEYS = {f.name for f in fields(ChannelConfig)}
_LN10 = math.log(10.0)

DEFAULT_PRESET = {
    "air-sweep": "air-desk",
    "scatter": "scatter-desk",
    "mk-pdf": "mkpdf-desk",
    "offdiag-decay": "offdiag-desk",
    "haar-ks": "haar-desk",
    "upsilon": "upsilon-desk",
    "bounds-table": "bounds-desk",
}


# ----------------------------------------------------------------------
# Parameter resolution
# ----------------------------------------------------------------------

def _parse_override(token: str) -> tuple[str, object]:
    if "=" not in token:
        raise SystemExit(f"override {token!r} is not of the form key=value")
    key, raw = token.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _merge(base: dict, extra: dict) -> dict:
    """Shallow merge except the ``config`` block, which merges key-wise."""
    out = dict(base)
    for key, value in extra.items():
        if key == "config" and isinstance(value, dict) and isinstance(out.get("config"), dict):
            out["config"] = {**out["config"], **value}
        else:
            out[key] = value
    return out


def resolve_params(command: str, args: argparse.Namespace) -> dict:
    params = get_preset(args.preset or DEFAULT_PRESET[command])
    preset_cmd = params.pop("command", command)
    if preset_cmd != command:
        raise SystemExit(f"preset is for {preset_cmd!r}, not {command!r}")
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise SystemExit(f"config file {args.config} must contain a JSON object")
        # Accept channel fields either nested under "config" or at top level.
        flat_cfg = {k: v for k, v in loaded.items() if k in _CONFIG_KEYS}
        rest = {k: v for k, v in loaded.items() if k not in _CONFIG_KEYS}
        if flat_cfg:
            rest["config"] = {**loaded.get("config", {}), **flat_cfg}
        params = _merge(params, rest)
    for token in args.overrides:
        key, value = _parse_override(token)
        if key in _CONFIG_KEYS:
            params.setdefault("config", {})[key] = value
        else:
            params[key] = value
    if args.seed is not None:
        params.setdefault("config", {})["seed"] = int(args.seed)
    return params


def resolve_config(params: dict) -> ChannelConfig:
    """Build the channel configuration, converting fiber units to SI once."""
    raw = dict(params.get("config", {}))
    units = params.get("units", "normalized")
    if units == "fiber":
        raw["length"] = raw["length"] * 1e3  # km -> m
        raw["dt"] = raw["dt"] * 1e-12  # ps -> s
        raw["gamma"] = raw.get("gamma", 0.0) * 1e-3  # 1/(W km) -> 1/(W m)
        raw["beta2"] = raw.get("beta2", 0.0) * 1e-27  # ps^2/km -> s^2/m
        alpha = np.asarray(raw.get("alpha", 0.0), dtype=float)
        raw["alpha"] = (alpha * (_LN10 / 10.0) * 1e-3).tolist()  # dB/km -> 1/m
        raw["sigma2"] = raw.get("sigma2", 0.0) * 1e-3  # W/km -> W/m
    elif units != "normalized":
        raise SystemExit(f"unknown units {units!r} (expected 'normalized' or 'fiber')")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise SystemExit(f"unknown config keys: {sorted(unknown)}")
    try:
        return ChannelConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise SystemExit(f"invalid config: {exc}") from None


def _dbm_to_watt(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def _watt_to_dbm(watt: float) -> float:
    return 10.0 * math.log10(watt / 1e-3) if watt > 0 else float("-inf")


# ----------------------------------------------------------------------
# Output writing
# ----------------------------------------------------------------------

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: Path, schema: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"#schema={schema}/{SCHEMA_VERSION}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def write_metadata(
    path: Path,
    command: str,
    params: dict,
    seed,
    started: float,
    outputs: list[str],
    extras: dict | None = None,
) -> None:
    meta = {
        "schema": f"{command}-meta/{SCHEMA_VERSION}",
        "command": command,
        "seed": seed,
        "parameters": params,
        "versions": {
            "ssfmlab": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "timing": {
            "started_utc": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
            "elapsed_seconds": time.time() - started,
        },
        "outputs": outputs,
    }
    if extras:
        meta.update(extras)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=False, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def _cmd_air_sweep(params: dict, out: Path, threads: int, svg: bool):
    cfg0 = resolve_config(params)
    method = params.get("method", "ring")
    rule = params.get("segment_rule")

    # Point list: explicit schedule rows, dBm powers (fiber), or raw powers.
    # Each point: (power_W, m_A, bins, amp_bins, samples).
    points: list[tuple[float, int, int, int, int]] = []
    if "schedule" in params:
        for snr_db, m_a, bins, amp_bins, samples in params["schedule"]:
            power = 10.0 ** (snr_db / 10.0) * cfg0.sigma2 * cfg0.length
            points.append((float(power), int(m_a), int(bins), int(amp_bins),
                           int(samples)))
    else:
        m_a = int(params.get("m_A", 16))
        bins = int(params.get("bins", 64))
        amp_bins = int(params.get("amp_bins", bins))
        samples = int(params.get("samples_per_point", 60000))
        if "powers_dbm" in params:
            powers = [_dbm_to_watt(float(d)) for d in params["powers_dbm"]]
        else:
            powers = [float(p) for p in params["powers"]]
        points = [(p, m_a, bins, amp_bins, samples) for p in powers]

    root = RngStream(cfg0.seed)

    def job(idx: int):
        power, m_a, bins, amp_bins, samples = points[idx]
        snr = cfg0.snr(power)
        if rule:
            K = air_segment_rule(
                snr,
                k_min=int(rule.get("k_min", 200)),
                exponent=float(rule.get("exponent", 2.0 / 3.0)),
                k_max=(int(rule["k_max"]) if rule.get("k_max") is not None else None),
            )
        else:
            K = cfg0.K
        cfg = cfg0.with_K(K)
        base = [
            _watt_to_dbm(power),
            10.0 * math.log10(snr),
        ]
        try:
            curve = air_sweep(
                cfg, [power], m_a, samples, root.child(idx),
                bins=bins, amp_bins=amp_bins, method=method, threads=1,
            )
            return base + [
                curve.mi[0], curve.upper[0], curve.lower[0],
                curve.mi_phase[0], curve.mi_amp[0],
                str(curve.amp_source[0]),
                K, m_a, bins, amp_bins, samples, "",
            ]
        except Exception as exc:  # recorded per point, run continues
            nan = float("nan")
            return base + [nan, upper_bound(snr), lower_bound_asymptotic(snr),
                           nan, nan, "",
                           K, m_a, bins, amp_bins, samples, str(exc)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, range(len(points))))
    else:
        rows = [job(i) for i in range(len(points))]

    header = [
        "power_dbm", "snr_db", "mi_bits", "upper_bits", "lower_bits",
        "mi_phase_bits", "mi_amp_bits", "amp_source",
        "K", "m_A", "bins", "amp_bins", "samples", "error",
    ]
    csv_path = out / "air-sweep.csv"
    write_csv(csv_path, "air-sweep", header, rows)
    outputs = [csv_path.name]
    if svg:
        svg_path = out / "air-sweep.svg"
        xs = [r[1] for r in rows]
        svgplot.line_plot(
            xs,
            {
                "MI": [r[2] for r in rows],
                "upper": [r[3] for r in rows],
                "lower": [r[4] for r in rows],
            },
            str(svg_path),
            title="Achievable rate sweep",
            xlabel="SNR (dB)",
            ylabel="bits / complex sample",
        )
        outputs.append(svg_path.name)
    return csv_path, outputs, {"points": len(rows)}


def _cmd_scatter(params: dict, out: Path, threads: int, svg: bool):
    cfg = resolve_config(params)
    m_a = int(params.get("m_A", 16))
    samples = int(params.get("samples_per_point", 1024))
    if "powers_dbm" in params:
        powers = [_dbm_to_watt(float(d)) for d in params["powers_dbm"]]
    else:
        powers = [float(p) for p in params["powers"]]
    vectors = max(1, samples // cfg.n)
    records = scatter_capture(cfg, powers, m_a, vectors, RngStream(cfg.seed))
    header = ["power", "snr_db", "sample", "x_re", "x_im", "y_re", "y_im", "error"]
    rows = []
    for rec in records:
        snr_db = 10.0 * math.log10(rec["snr"])
        for i, (xv, yv) in enumerate(zip(rec["x"], rec["y"])):
            rows.append([rec["power"], snr_db, i, xv.real, xv.imag, yv.real, yv.imag, ""])
    csv_path = out / "scatter.csv"
    write_csv(csv_path, "scatter", header, rows)
    outputs = [csv_path.name]
    if svg:
        svg_path = out / "scatter.svg"
        groups = {
            f"P={rec['power']:.3g}": [complex(v) for v in rec["y"][:2000]]
            for rec in records
        }
        svgplot.scatter_plot(groups, str(svg_path), title="Received constellation (normalized)")
        outputs.append(svg_path.name)
    return csv_path, outputs, {"points": len(records)}


def _fixed_b(params: dict, n: int) -> np.ndarray:
    spec = params.get("fixed_b", "spread")
    if spec == "spread":
        return (math.pi / 3.0) * (np.arange(1, n + 1) / n)
    return np.asarray(spec, dtype=float)


def _cmd_mk_pdf(params: dict, out: Path, threads: int, svg: bool):
    cfg = resolve_config(params)
    trials = int(params.get("trials", 10000))
    grid = int(params.get("grid", 200))
    profile = fixed_profile(cfg.n, cfg.K, _fixed_b(params, cfg.n))
    mk = sample_MK(profile, RngStream(cfg.seed), trials=trials)
    w = np.abs(mk.matrices[:, 0, 0])
    ks = ks_statistic(w, lambda x: haar_entry_marginal_cdf(x, cfg.n))
    edges = np.linspace(0.0, 1.0, grid + 1)
    density, _ = np.histogram(w, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    limit = haar_entry_marginal_pdf(centers, cfg.n)
    header = ["r", "empirical_density", "limit_density", "error"]
    rows = [[c, d, l, ""] for c, d, l in zip(centers, density, limit)]
    csv_path = out / "mk-pdf.csv"
    write_csv(csv_path, "mk-pdf", header, rows)
    outputs = [csv_path.name]
    if svg:
        svg_path = out / "mk-pdf.svg"
        svgplot.line_plot(
            centers.tolist(),
            {"empirical": density.tolist(), "limit": limit.tolist()},
            str(svg_path),
            title="|entry| density vs unitary-ensemble limit",
            xlabel="|entry|", ylabel="density",
        )
        outputs.append(svg_path.name)
    return csv_path, outputs, {"ks_statistic": ks, "trials": trials}


def _cmd_haar_ks(params: dict, out: Path, threads: int, svg: bool):
    cfg = resolve_config(params)
    trials = int(params.get("trials", 10000))
    profile = fixed_profile(cfg.n, cfg.K, _fixed_b(params, cfg.n))
    root = RngStream(cfg.seed)
    w_mk = np.abs(sample_MK(profile, root.child(0), trials=trials).matrices[:, 0, 0])
    w_qr = np.abs(haar_unitary(cfg.n, root.child(1), trials=trials)[:, 0, 0])
    cdf = lambda x: haar_entry_marginal_cdf(x, cfg.n)  # noqa: E731
    rows = [
        ["ks_channel_vs_limit", ks_statistic(w_mk, cdf), ""],
        ["ks_reference_vs_limit", ks_statistic(w_qr, cdf), ""],
        ["ks_two_sample_channel_vs_reference", ks_two_sample(w_mk, w_qr), ""],
    ]
    header = ["statistic", "value", "error"]
    csv_path = out / "haar-ks.csv"
    write_csv(csv_path, "haar-ks", header, rows)
    return csv_path, [csv_path.name], {"trials": trials}


def _cmd_offdiag_decay(params: dict, out: Path, threads: int, svg: bool):
    cfg = resolve_config(params)
    k_values = [int(k) for k in params.get("k_values", [100, 1000, 10000])]
    trials = int(params.get("trials", 200))
    fit = offdiag_decay_fit(cfg, k_values, trials, RngStream(cfg.seed))
    header = ["K", "median_max_offdiag", "error"]
    rows = [[int(k), float(m), ""] for k, m in zip(fit.K_values, fit.medians)]
    csv_path = out / "offdiag-decay.csv"
    write_csv(csv_path, "offdiag-decay", header, rows)
    outputs = [csv_path.name]
    if svg and not fit.degenerate:
        svg_path = out / "offdiag-decay.svg"
        svgplot.line_plot(
            [float(k) for k in fit.K_values],
            {"median max off-diagonal": [float(m) for m in fit.medians]},
            str(svg_path),
            title=f"Off-diagonal decay (slope {fit.slope:.3f})",
            xlabel="K", ylabel="median max |off-diag|", logx=True,
        )
        outputs.append(svg_path.name)
    extras = {
        "slope": fit.slope,
        "slope_stderr": fit.stderr,
        "degenerate": fit.degenerate,
        "trials": trials,
    }
    return csv_path, outputs, extras


def _cmd_upsilon(params: dict, out: Path, threads: int, svg: bool):
    cfg0 = resolve_config(params)
    deltas = [float(d) for d in params.get("deltas", [0.6])]
    k_values = [int(k) for k in params.get("k_values", [cfg0.K])]
    trials = int(params.get("trials", 200))
    p0 = float(params.get("P0", 1.0))
    pair_difference = bool(params.get("pair_difference", False))
    root = RngStream(cfg0.seed)
    combos = [(d, k) for d in deltas for k in k_values]

    def job(idx: int):
        delta, K = combos[idx]
        try:
            est = convergence_rate_upsilon(
                cfg0.with_K(K), delta, trials, root.child(idx),
                P0=p0, pair_difference=pair_difference,
            )
            return [delta, K, est.median, est.iqr[0], est.iqr[1],
                    upsilon_theory(delta), trials, ""]
        except Exception as exc:
            nan = float("nan")
            return [delta, K, nan, nan, nan, upsilon_theory(delta), trials, str(exc)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, range(len(combos))))
    else:
        rows = [job(i) for i in range(len(combos))]

    header = ["delta", "K", "upsilon_median", "iqr_lo", "iqr_hi",
              "upsilon_theory", "trials", "error"]
    csv_path = out / "upsilon.csv"
    write_csv(csv_path, "upsilon", header, rows)
    outputs = [csv_path.name]
    if svg:
        svg_path = out / "upsilon.svg"
        series: dict[str, list] = {}
        for d in deltas:
            series[f"delta={d:g}"] = [r[2] for r in rows if r[0] == d]
        svgplot.line_plot(
            [float(k) for k in k_values], series, str(svg_path),
            title="Convergence exponent vs K",
            xlabel="K", ylabel="upsilon (median)", logx=True,
        )
        outputs.append(svg_path.name)
    return csv_path, outputs, {"trials": trials, "pair_difference": pair_difference}


def _cmd_bounds_table(params: dict, out: Path, threads: int, svg: bool):
    snr_db = [float(s) for s in params.get("snr_db", [0, 10, 20, 30, 40])]
    zeta = float(params.get("zeta", 0.0))
    deltas = [float(d) for d in params.get("deltas", [0.5, 1.0, 2.0, 4.0])]
    snr_lin = [10.0 ** (s / 10.0) for s in snr_db]
    table = bounds_table(snr_lin, zeta=zeta)
    header = ["snr_db", "snr", "upper_bits", "lower_asymptotic_bits",
              "phase_noise_bits", "loss_factor_a", "error"]
    rows = [
        [db, row.snr, row.upper, row.lower_asymptotic, row.phase_noise, row.a, ""]
        for db, row in zip(snr_db, table)
    ]
    csv_path = out / "bounds-table.csv"
    write_csv(csv_path, "bounds-table", header, rows)
    prelog_path = out / "bounds-prelog.csv"
    write_csv(
        prelog_path, "bounds-prelog",
        ["delta", "prelog_r", "upsilon_theory", "error"],
        [[d, prelog_r(d), upsilon_theory(d), ""] for d in deltas],
    )
    outputs = [csv_path.name, prelog_path.name]
    if svg:
        svg_path = out / "bounds-table.svg"
        svgplot.line_plot(
            snr_db,
            {
                "upper": [r[2] for r in rows],
                "lower (asymptotic)": [r[3] for r in rows],
                "phase-noise": [r[4] for r in rows],
            },
            str(svg_path),
            title=f"Capacity bounds (zeta={zeta:g})",
            xlabel="SNR (dB)", ylabel="bits / complex sample",
        )
        outputs.append(svg_path.name)
    return csv_path, outputs, {"zeta": zeta}


_COMMANDS = {
    "air-sweep": _cmd_air_sweep,
    "scatter": _cmd_scatter,
    "mk-pdf": _cmd_mk_pdf,
    "offdiag-decay": _cmd_offdiag_decay,
    "haar-ks": _cmd_haar_ks,
    "upsilon": _cmd_upsilon,
    "bounds-table": _cmd_bounds_table,
}


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssfmlab",
        description="Split-step fiber-channel laboratory: sweeps, random-matrix "
        "statistics, convergence laws, and capacity bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in _COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, help="JSON parameter file")
        p.add_argument("--preset", help="named preset to start from")
        p.add_argument("--seed", type=int, help="override the random seed")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument("--svg", action="store_true", help="also write an SVG figure")
        p.add_argument(
            "overrides", nargs="*", metavar="key=value",
            help="parameter overrides; channel-field keys route to the config block",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = resolve_params(args.command, args)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    try:
        csv_path, outputs, extras = _COMMANDS[args.command](
            params, out, max(1, args.threads), args.svg
        )
    except SystemExit:
        raise
    except Exception as exc:
        print(f"ssfmlab {args.command}: {exc}", file=sys.stderr)
        return 1
    seed = params.get("config", {}).get("seed")
    meta_path = out / f"{args.command}.meta.json"
    write_metadata(meta_path, args.command, params, seed, started, outputs, extras)
    elapsed = time.time() - started
    extras_str = ", ".join(f"{k}={_format_cell(v)}" for k, v in extras.items())
    print(f"ssfmlab {args.command}: wrote {csv_path} (+{meta_path.name}) "
          f"in {elapsed:.1f}s [{extras_str}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
