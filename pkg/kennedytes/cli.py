"""Unified command line for the receiver simulation.

python -m kennedytes.cli bounds --alpha-sq-grid 0,1,4.8 --out bounds.csv
python -m kennedytes.cli curve --grid 0.5,1,2,4.8 --out curve.csv           # analytic curve
python -m kennedytes.cli sweep-beta --alpha-sq 1.5 --grid 0.5,1,1.5 --seed 7 --out beta.csv
python -m kennedytes.cli sweep-alpha --grid 1,2,4.8 --optimize --seed 7 --out alpha.csv
python -m kennedytes.cli simulate --config run.env                        # flat KEY=VALUE file
python -m kennedytes.cli traces --photons 0,1,2 --count 100 --seed 7 --out traces.bin
python -m kennedytes.cli check                                             # exit 1 on fail

Exit codes: 0 success, 1 usage or configuration error, 2 runtime or numerical error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from . import io
from .bounds import helstrom_error, sql_error
from .errors import ConfigError
from .experiment import expected_curve, run_experiment, sweep_alpha, sweep_beta
from .experiment.detectors import TraceDetector, detector_modes
from .experiment.parallel import stream
from .models import ExperimentConfig, ExperimentResult, HistogramConfig, ReceiverParams, TesResponseModel
from .reproduction import check_thresholds, compute_report, format_report
from .trace_model import calibrate_spacing, mean_photon_number, score_traces, simulate_traces

load_dotenv()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

# Visibility of the reference analytic curve; the measured value is 0.998.
DEFAULT_VISIBILITY = 0.9985


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from e


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> List[float]:
    try:
        return io.parse_float_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _int_list(text: str) -> List[int]:
    try:
        return io.parse_int_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _params(args) -> ReceiverParams:
    return ReceiverParams(
        transmissivity=args.transmissivity,
        visibility=args.visibility,
        efficiency=args.efficiency,
        dark_low_rate=args.dark_low,
        dark_high_rate=args.dark_high,
        dark_high_threshold=args.dark_threshold,
    )


def _tes_overrides(args) -> dict:
    given = {
        "gain": args.gain,
        "noise_rms": args.noise_rms,
        "n_sat": args.n_sat,
        "compression": args.compression,
    }
    return {k: v for k, v in given.items() if v is not None}


def _experiment_config(args, **fields) -> ExperimentConfig:
    tes = _tes_overrides(args)
    return ExperimentConfig(
        params=_params(args),
        mode=args.mode,
        tes=TesResponseModel(**tes) if tes else None,
        score_method=args.score_method,
        histogram_dir=args.histogram_dir,
        training_trials=args.training_trials,
        evaluation_trials=args.trials,
        seed=args.seed,
        workers=args.workers,
        chunk_trials=args.chunk_trials,
        format=args.format,
        out=args.out,
        **fields,
    )


def _report(results: List[ExperimentResult], path, format: str) -> None:
    io.emit_results(results, format, path)
    for r in results:
        improvement = "n/a" if r.improvement_db is None else f"{r.improvement_db:+.2f} dB"
        print(
            f"  alpha_sq={r.alpha_sq:<8.4g} beta_sq={r.beta_sq:<8.4g} "
            f"p_err={r.p_err:.4e} +- {r.p_err_stderr:.1e}  vs SQL {improvement}"
        )
    print(f"Saved {len(results)} rows to {path}")


# --------------------------------------------------------------------------- #
# Commands
# --------------------------------------------------------------------------- #
def cmd_bounds(args) -> None:
    rows = [
        {"alpha_sq": x, "p_sql": sql_error(x), "p_helstrom": helstrom_error(x)}
        for x in args.alpha_sq_grid
    ]
    io.emit_rows(args.out, io.BOUNDS_FIELDS, rows, args.format)
    print(f"Saved {len(rows)} rows to {args.out}")


def cmd_curve(args) -> None:
    params = _params(args)
    points = expected_curve(args.grid, params, with_dark=params.has_dark)
    io.dump_models(args.out, points, io.CURVE_FIELDS, args.format)
    print(f"Saved {len(points)} curve points to {args.out}")


def cmd_sweep_beta(args) -> None:
    config = _experiment_config(args, alpha_sq=args.alpha_sq)
    print(f"Sweeping {len(args.grid)} displacements at alpha_sq={args.alpha_sq} ({args.mode})")
    _report(sweep_beta(args.alpha_sq, args.grid, config), args.out, args.format)


def cmd_sweep_alpha(args) -> None:
    if args.beta_sq is not None:
        config = _experiment_config(args, beta_mode="fixed", beta_sq=args.beta_sq)
    else:
        config = _experiment_config(args)
    print(f"Sweeping {len(args.grid)} intensities ({args.mode}, beta {config.beta_mode})")
    _report(sweep_alpha(args.grid, config), args.out, args.format)


def cmd_simulate(args) -> None:
    config = io.load_config(args.config)
    updates = {}
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.out is not None:
        updates["out"] = args.out
    if updates:
        config = config.model_copy(update=updates)
    if config.out is None:
        raise ConfigError("no output path: set 'out' in the config file or pass --out")

    if config.alpha_sq_grid is not None:
        results = sweep_alpha(config.alpha_sq_grid, config)
    elif config.beta_grid is not None:
        results = sweep_beta(config.alpha_sq, config.beta_grid, config)
    else:
        results = [run_experiment(config)]
    _report(results, config.out, config.format)


def cmd_traces(args) -> None:
    model = TesResponseModel(**_tes_overrides(args))
    detector = TraceDetector(model, HistogramConfig(), filter_traces=args.filter_traces)
    filt = detector.build_filter(stream(args.seed, (0,)))
    spacing = calibrate_spacing(filt, model)
    rng = stream(args.seed, (1,))

    blocks = []
    print(f"Per-photon score spacing: {spacing:.6g}")
    print(f"  {'n':>4} {'mean score':>12} {'recovered n':>12}")
    for n in args.photons:
        samples = simulate_traces(np.full(args.count, n), model, rng, detector.template)
        scores = score_traces(samples, filt)
        print(f"  {n:>4} {scores.mean():>12.6g} {mean_photon_number(scores, spacing):>12.4f}")
        blocks.append(samples)
    io.write_trace_dump(args.out, np.concatenate(blocks), model.dt)
    print(f"Saved {len(args.photons) * args.count} traces to {args.out}")


def cmd_check(_args) -> int:
    report = compute_report()
    print(format_report(report))
    passed, _ = check_thresholds(report)
    return EXIT_OK if passed else EXIT_USAGE


# --------------------------------------------------------------------------- #
# Parser
# --------------------------------------------------------------------------- #
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kennedytes", description="Kennedy receiver / TES simulation")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, required=True):
        p.add_argument("--out", required=required, help="output file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def add_receiver(p):
        p.add_argument("--transmissivity", type=float, default=0.982)
        p.add_argument("--visibility", type=float, default=DEFAULT_VISIBILITY)
        p.add_argument("--efficiency", type=float, default=0.98)
        p.add_argument("--dark-low", type=float, default=0.0, help="low-energy dark probability per pulse")
        p.add_argument("--dark-high", type=float, default=0.0, help="high-energy dark probability per pulse")
        p.add_argument("--dark-threshold", type=int, default=15, help="photon number above which high-energy darks land")

    def add_tes(p):
        p.add_argument("--gain", type=float, default=None)
        p.add_argument("--noise-rms", type=float, default=None, help="default: 6 sigma per photon")
        p.add_argument("--n-sat", type=float, default=None)
        p.add_argument("--compression", type=float, default=None, help="1 disables saturation")

    def add_run(p):
        add_receiver(p)
        add_tes(p)
        add_output(p)
        p.add_argument("--mode", choices=detector_modes(), default="ideal")
        p.add_argument("--score-method", choices=("matched", "height"), default=None)
        p.add_argument("--histogram-dir", default=None, help="write trained score histograms here")
        p.add_argument("--trials", type=int, default=1_000_000, help="evaluation trials per point")
        p.add_argument("--training-trials", type=int, default=1_000_000, help="per branch, trace mode")
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--workers", type=int, default=_env_int("KENNEDYTES_WORKERS", 1))
        p.add_argument(
            "--chunk-trials", type=int, default=_env_int("KENNEDYTES_CHUNK_TRIALS", 50_000)
        )

    p_b = sub.add_parser("bounds", help="SQL and Helstrom limits")
    p_b.add_argument("--alpha-sq-grid", type=_float_list, required=True)
    add_output(p_b)
    p_b.set_defaults(func=cmd_bounds)

    p_c = sub.add_parser("curve", help="analytic ideal-counter curve against the SQL")
    p_c.add_argument("--grid", type=_float_list, required=True)
    add_receiver(p_c)
    add_output(p_c)
    p_c.set_defaults(func=cmd_curve)

    p_sb = sub.add_parser("sweep-beta", help="error vs displacement relative to the optimum")
    p_sb.add_argument("--alpha-sq", type=float, required=True)
    p_sb.add_argument("--grid", type=_float_list, required=True, help="multipliers of beta_opt")
    add_run(p_sb)
    p_sb.set_defaults(func=cmd_sweep_beta)

    p_sa = sub.add_parser("sweep-alpha", help="error vs signal intensity")
    p_sa.add_argument("--grid", type=_float_list, required=True)
    beta = p_sa.add_mutually_exclusive_group()
    beta.add_argument("--optimize", action="store_true", help="optimal beta per point (default)")
    beta.add_argument("--beta-sq", type=float, default=None, help="fixed displacement intensity")
    add_run(p_sa)
    p_sa.set_defaults(func=cmd_sweep_alpha)

    p_s = sub.add_parser("simulate", help="run an experiment described by a config file")
    p_s.add_argument("--config", required=True)
    p_s.add_argument("--out", default=None, help="overrides 'out' in the config")
    p_s.add_argument("--workers", type=int, default=None)
    p_s.set_defaults(func=cmd_simulate)

    p_t = sub.add_parser("traces", help="dump simulated traces and check score calibration")
    p_t.add_argument("--photons", type=_int_list, required=True)
    p_t.add_argument("--count", type=int, default=100, help="traces per photon number")
    p_t.add_argument("--filter-traces", type=int, default=10_000)
    p_t.add_argument("--seed", type=int, required=True)
    p_t.add_argument("--out", required=True, help="binary trace dump")
    add_tes(p_t)
    p_t.set_defaults(func=cmd_traces)

    p_k = sub.add_parser("check", help="print the reproduction scorecard")
    p_k.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    try:
        status = args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
