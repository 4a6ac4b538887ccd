"""Command-line interface: ``generate``, ``detect``, ``bench`` and ``calibrate``.

Exit status is 0 on success, 1 on a usage error and 2 when the input data or
parameters are rejected.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .baselines import BASELINES, run_baseline
from .bench import (CALIBRATION_COUNTS, CALIBRATION_LENGTHS, DETECTORS, TIMING_REPEATS,
                    calibrate_reference_loss, load_grid, run_sweep, write_csv)
from .config import GMPDAConfig
from .curves import CurveParams, curve
from .detect import SCHEMA_VERSION, detect
from .errors import ConfigError, GMPDAError
from .events import read_series, write_series
from .generator import GenerativeSpec, generate, suite_specs
from .intervals import estimate_z_hat, interval_histogram
from .models import Model, check_sigma_spec, resolve_sigma

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
_CONFIG_KEYS = set(GMPDAConfig.__dataclass_fields__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _on_off(text: str) -> bool:
    t = text.strip().lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _sigma(text: str):
    try:
        check_sigma_spec(text)
    except GMPDAError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    try:
        return float(text)
    except ValueError:
        return text.strip().lower()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gmpda", description="Periodicity detection in event time series.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic event series")
    g.add_argument("--model", default="rw", help="clock or rw")
    g.add_argument("--mu", type=int, action="append", required=True,
                   help="period in ticks; repeat for several periods")
    g.add_argument("--sigma", type=_sigma, action="append",
                   help="interval spread: number, 'log' or 'mu/k'; one value or one per --mu")
    g.add_argument("--n", type=int, required=True, help="events per period")
    g.add_argument("--beta", type=float, default=0.0, help="noise events per periodic event")
    g.add_argument("--offset", type=int, action="append", help="start tick per period")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("timestamps", "binary"), default="timestamps")
    g.add_argument("--out", help="output file (stdout if omitted)")

    d = sub.add_parser("detect", help="detect periods in an event series")
    d.add_argument("--in", dest="input", required=True, help="series file")
    d.add_argument("--method", choices=("gmpda", *BASELINES), default="gmpda")
    d.add_argument("--config", help="key = value file with GMPDA parameters")
    d.add_argument("--preset", choices=("default", "real", "bench"), default="default",
                   help="parameter preset applied before --config and flags")
    d.add_argument("--model", help="clock or rw")
    d.add_argument("--loss-length", type=int)
    d.add_argument("--max-periods", type=int)
    d.add_argument("--tol", type=float)
    d.add_argument("--curve-fit", type=_on_off)
    d.add_argument("--sigma-init", type=_sigma)
    d.add_argument("--L-min", dest="L_min", type=int)
    d.add_argument("--L-max", dest="L_max", type=int)
    d.add_argument("--reference-loss", type=float,
                   help="flag the result low-confidence when its loss is not below this")
    d.add_argument("-k", type=int, default=1, help="periods returned by a baseline method")
    d.add_argument("--dump-histogram", help="CSV of mu, D(mu), expected noise")
    d.add_argument("--dump-curve", help="CSV of mu, fitted curve, expected noise")
    d.add_argument("--out", help="result JSON (stdout if omitted)")

    b = sub.add_parser("bench", help="run detectors over a synthetic test grid")
    b.add_argument("--grid", required=True, help="TOML grid file")
    b.add_argument("--detectors", default="gmpda",
                   help=f"comma-separated subset of {','.join(DETECTORS)}")
    b.add_argument("--seed", type=int, help="master seed (overrides the grid file)")
    b.add_argument("--timing", action="store_true",
                   help=f"average each detection over {TIMING_REPEATS} repeats")
    b.add_argument("--repeats", type=int, help="timing repeats (implies --timing)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", help="aggregate CSV (stdout if omitted)")

    c = sub.add_parser("calibrate", help="reference loss from pure-noise series")
    c.add_argument("--counts", type=_int_list, default=list(CALIBRATION_COUNTS))
    c.add_argument("--lengths", type=_int_list, default=list(CALIBRATION_LENGTHS))
    c.add_argument("--reps", type=int, default=100)
    c.add_argument("--quantile", type=float, default=0.01)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--config", help="key = value file with GMPDA parameters")
    c.add_argument("--out", help="result JSON (stdout if omitted)")
    return p


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text.strip().strip("'\"")


def read_config_file(path: str) -> dict:
    """Read ``key = value`` lines.

    Values are parsed as TOML scalars where possible and kept as bare strings
    otherwise, so ``sigma_init = log`` and ``sigma_init = "log"`` agree.
    Blank lines and ``#`` comments are skipped.
    """
    data = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            data[key] = _parse_value(value.strip())
    return data


def _config(args) -> GMPDAConfig:
    presets = {"default": GMPDAConfig, "real": GMPDAConfig.real_data,
               "bench": GMPDAConfig.benchmark}
    values = presets[getattr(args, "preset", "default")]().to_dict()
    if args.config:
        values.update(read_config_file(args.config))
    for key in ("model", "loss_length", "max_periods", "tol", "curve_fit", "sigma_init",
                "L_min", "L_max"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return GMPDAConfig(**values)


def _cmd_generate(args) -> int:
    model = Model.parse(args.model)
    mus = args.mu
    sigmas = args.sigma or ["log"]
    if len(sigmas) == 1:
        sigmas = sigmas * len(mus)
    if len(sigmas) != len(mus):
        raise UsageError("give one --sigma or one per --mu")
    offsets = tuple(args.offset) if args.offset else ()
    label = str(sigmas[0]) if len(set(map(str, sigmas))) == 1 else None
    spec = GenerativeSpec(model=model, periods=tuple(mus),
                          sigmas=tuple(resolve_sigma(s, mu) for s, mu in zip(sigmas, mus)),
                          n=args.n, beta=args.beta, offsets=offsets, seed=args.seed,
                          sigma_label=label)
    series = generate(spec)
    if args.out:
        write_series(series, args.out, fmt=args.format)
    else:
        buf = io.StringIO()
        write_series(series, buf, fmt=args.format)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _write_csv(path: str, header: str, columns) -> None:
    def fmt(col):
        col = np.asarray(col)
        if np.issubdtype(col.dtype, np.integer):
            return [str(int(v)) for v in col]
        return [f"{v:.6f}" for v in col]

    cells = [fmt(c) for c in columns]
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*cells):
            fh.write(",".join(row) + "\n")


def _cmd_detect(args) -> int:
    series = read_series(args.input)
    if args.method != "gmpda":
        res = run_baseline(args.method, series, args.k)
        out = {"schema": SCHEMA_VERSION, "method": res.method, "periods": list(res.periods),
               "scores": list(res.scores), "n_events": len(series), "length": series.length}
        _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK

    cfg = _config(args)
    result = detect(series, cfg, reference_loss=args.reference_loss)
    payload = result.to_dict()
    payload["method"] = "gmpda"
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)

    if args.dump_histogram or args.dump_curve:
        hist = interval_histogram(series, min(cfg.loss_length, series.length))
        noise = estimate_z_hat(hist, min(cfg.noise_range, hist.max_lag))
        lags = hist.lags
        zeta = noise.expected(lags)
        if args.dump_histogram:
            _write_csv(args.dump_histogram, "mu,D,zeta", (lags, hist.counts, zeta))
        if args.dump_curve:
            g = np.zeros(lags.size)
            if result.periods:
                params = CurveParams.for_series(cfg.model, result.periods, result.sigmas, series)
                g = curve(params, lags)
            _write_csv(args.dump_curve, "mu,G,zeta", (lags, g, zeta))
    return EXIT_OK


def _cmd_bench(args) -> int:
    grid = load_grid(args.grid)
    if args.seed is not None:
        grid = replace(grid, master_seed=args.seed)
    detectors = [d.strip() for d in args.detectors.split(",") if d.strip()]
    repeats = args.repeats or (TIMING_REPEATS if args.timing else 1)
    result = run_sweep(suite_specs(grid), detectors, repeats=repeats, workers=args.workers)
    if args.out:
        result.write_csv(args.out)
    else:
        buf = io.StringIO()
        write_csv(result.rows, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    cfg = GMPDAConfig(**read_config_file(args.config)) if args.config else None
    ref = calibrate_reference_loss(args.counts, args.lengths, args.reps, args.quantile,
                                   args.seed, cfg)
    _emit(ref.to_json() + "\n", args.out)
    return EXIT_OK


_COMMANDS = {"generate": _cmd_generate, "detect": _cmd_detect, "bench": _cmd_bench,
             "calibrate": _cmd_calibrate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (GMPDAError, OSError, tomllib.TOMLDecodeError, TypeError) as exc:
        print(f"gmpda: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
