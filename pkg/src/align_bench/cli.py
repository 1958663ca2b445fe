"""Command-line interface.

Subcommands
-----------
* ``gains``     exact gain-vs-cost table for both schemes (CSV)
* ``build``     generate channels + beamformers for (K, n*, seed), write both files
* ``verify``    re-check a (channels, design) pair and print the report
* ``simulate``  ZF rate sweep and multiplexing-gain slope estimate (CSV)

Exit codes: 0 success, 2 bad parameters or malformed files, 3 numerical
construction/simulation failure, 4 verification failure.  The environment
variable ``ALIGN_BENCH_TOL`` overrides the default tolerance wherever
``--tol`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .beamformer import build_design, load_design, save_design
from .channel import DEFAULT_H_MAX, DEFAULT_H_MIN, generate_channels, load_channels, save_channels
from .dof import gain_table, stream_counts
from .errors import (
    DegenerateDesignError,
    DimensionError,
    FormatError,
    ParameterError,
    SingularDiagonalError,
    SingularMatrixError,
)
from .fileio import atomic_write_text
from .linksim import estimate_slope
from .numerics import DEFAULT_RANK_TOL
from .verifier import DEFAULT_VERIFY_TOL, verify_design

_TOL_ENV = "ALIGN_BENCH_TOL"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY_FAILED = 4


def _env_tol() -> float | None:
    raw = os.environ.get(_TOL_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = float(raw)
    except ValueError as exc:
        raise ParameterError(f"{_TOL_ENV}={raw!r} is not a number") from exc
    if not value > 0.0:
        raise ParameterError(f"{_TOL_ENV} must be positive, got {value}")
    return value


def _resolve_tol(arg_tol: float | None, default: float) -> float:
    if arg_tol is not None:
        if not arg_tol > 0.0:
            raise ParameterError(f"--tol must be positive, got {arg_tol}")
        return arg_tol
    env = _env_tol()
    return env if env is not None else default


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="align-bench",
        description="Construct, verify, and simulate interference-alignment beamforming designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gains = sub.add_parser("gains", help="exact gain table for both schemes as CSV")
    gains.add_argument("-K", "--users", type=int, required=True, help="number of users (>= 3)")
    gains.add_argument("--max-uses", type=int, default=100, help="channel-use budget cap (default 100)")
    gains.add_argument("--nstar", type=int, default=None, help="emit only the proposed point at this budget")
    gains.add_argument("--m", type=int, default=None, help="emit only the original point at this parameter")
    gains.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    build = sub.add_parser("build", help="generate channels and beamformers, write both files")
    build.add_argument("-K", "--users", type=int, required=True, help="number of users (>= 3)")
    build.add_argument("--nstar", type=int, default=0, help="design budget n* (default 0)")
    build.add_argument("--seed", type=int, default=0, help="channel RNG seed (default 0)")
    build.add_argument("--hmin", type=float, default=DEFAULT_H_MIN, help="minimum entry magnitude")
    build.add_argument("--hmax", type=float, default=DEFAULT_H_MAX, help="maximum entry magnitude")
    build.add_argument("--tol", type=float, default=None, help="rank-validation tolerance")
    build.add_argument("--channels", required=True, help="output path for the channel file")
    build.add_argument("--design", required=True, help="output path for the design file")

    verify = sub.add_parser("verify", help="verify a (channels, design) pair")
    verify.add_argument("--channels", required=True, help="channel file to read")
    verify.add_argument("--design", required=True, help="design file to read")
    verify.add_argument("--tol", type=float, default=None, help="rank/inclusion tolerance (default 1e-8)")

    simulate = sub.add_parser("simulate", help="ZF rate sweep and slope estimate")
    simulate.add_argument("--channels", required=True, help="channel file to read")
    simulate.add_argument("--design", required=True, help="design file to read")
    simulate.add_argument("--snr-lo-db", type=float, default=40.0, help="sweep start (default 40 dB)")
    simulate.add_argument("--snr-hi-db", type=float, default=60.0, help="sweep end (default 60 dB)")
    simulate.add_argument("--steps", type=int, default=11, help="sweep points (default 11)")
    simulate.add_argument("--tol", type=float, default=None, help="singularity-screen tolerance")
    simulate.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    return parser


def cmd_gains(args) -> int:
    points = gain_table(args.users, args.max_uses)
    if args.nstar is not None or args.m is not None:
        selected = []
        if args.nstar is not None:
            selected.extend(p for p in points if p.scheme == "proposed" and p.param == args.nstar)
        if args.m is not None:
            selected.extend(p for p in points if p.scheme == "original" and p.param == args.m)
        points = selected
    rows = ["scheme,param,channel_uses,streams_total,gain_num,gain_den,gain_real"]
    for p in sorted(points, key=lambda p: (p.scheme, p.channel_uses)):
        rows.append(
            f"{p.scheme},{p.param},{p.channel_uses},{p.streams_total},"
            f"{p.gain.numerator},{p.gain.denominator},{float(p.gain)!r}"
        )
    _write_output(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_build(args) -> int:
    d3, d1 = stream_counts(args.users, args.nstar)
    M = d3 + d1
    cs = generate_channels(args.users, M, args.seed, args.hmin, args.hmax)
    design = build_design(cs, args.nstar, rank_tol=_resolve_tol(args.tol, DEFAULT_RANK_TOL))
    save_channels(cs, args.channels)
    save_design(design, args.design)
    d_vector = [design.V[k].shape[1] for k in range(1, args.users + 1)]
    print(f"K={args.users} n_star={args.nstar} M={M} d={d_vector}")
    print(f"channels: {args.channels}")
    print(f"design:   {args.design}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cs = load_channels(args.channels)
    design = load_design(args.design)
    report = verify_design(cs, design, tol=_resolve_tol(args.tol, DEFAULT_VERIFY_TOL))
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.overall else EXIT_VERIFY_FAILED


def cmd_simulate(args) -> int:
    cs = load_channels(args.channels)
    design = load_design(args.design)
    report = estimate_slope(
        cs,
        design,
        args.snr_lo_db,
        args.snr_hi_db,
        steps=args.steps,
        tol_rel=_resolve_tol(args.tol, DEFAULT_RANK_TOL),
    )
    rows = ["snr_db,sum_rate_bits"]
    rows.extend(f"{db!r},{rate!r}" for db, rate in zip(report.snr_grid_db, report.sum_rate_bits))
    rows.append(f"# slope_streams={report.slope_streams!r}")
    rows.append(f"# normalized_slope={report.normalized_slope!r}")
    rows.append(f"# target_gain={report.target_gain}")
    rows.append(f"# relative_deviation={report.relative_deviation!r}")
    _write_output(args.out, "\n".join(rows) + "\n")
    print(f"normalized_slope={report.normalized_slope:.6f}")
    print(f"target_gain={report.target_gain}")
    print(f"relative_deviation={report.relative_deviation:.6f}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handlers = {"gains": cmd_gains, "build": cmd_build, "verify": cmd_verify, "simulate": cmd_simulate}
    try:
        return handlers[args.command](args)
    except (ParameterError, DimensionError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"run 'align-bench {args.command} --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularDiagonalError, SingularMatrixError, DegenerateDesignError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def run() -> None:
    sys.exit(main())
