"""Command-line front end: run sweeps and analyses, emit CSV.

Subcommands::

    dossim sweep     --config scenario.cfg --out sweep.csv [--seed S] [--trials T]
    dossim eta-table --config scenario.cfg --out table.csv [--seed S] [--trials T]
    dossim analyze   [--K 3] [--x-max 1.99] [--N 100] [--snr-db 20] ... [--out grid.csv]

CSV output is UTF-8 with a header row and is byte-identical for identical
configuration and seed.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

import numpy as np

from .analysis import (
    all_fail_trend,
    chi2_cdf,
    chi2_cdf_poly_bound,
    prob_at_least_one,
    qualification_probability,
)
from .config import ConfigError, parse_scenario
from .harness import find_optimal_eta, mc_at_least_one, run_sweep, write_csv_atomic
from .scheduling import DosParams, eta_tr_for

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dossim",
        description="Monte Carlo simulator for multi-cell uplink user scheduling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, description in (
        ("sweep", "run the configured grid and write one CSV row per point"),
        ("eta-table", "search the eta_I axis for the best threshold per (K, N)"),
    ):
        p = sub.add_parser(name, help=description)
        p.add_argument("--config", required=True, help="scenario file path")
        p.add_argument("--out", help="output CSV path (overrides the config's out key)")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--trials", type=int, help="override trials per grid point")

    p = sub.add_parser("analyze", help="closed-form tables and Monte Carlo cross-checks")
    p.add_argument("--K", type=int, default=3, help="number of cells (default 3)")
    p.add_argument("--x-max", type=float, default=1.99, help="CDF grid upper edge")
    p.add_argument("--x-step", type=float, default=0.01, help="CDF grid step")
    p.add_argument("--N", type=int, default=100, help="users per cell for the MC check")
    p.add_argument("--snr-db", type=float, default=20.0)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--eta-i", type=float, default=0.5)
    p.add_argument("--eta-tr", type=float, default=None, help="default: epsilon * ln N")
    p.add_argument("--trials", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="optional CSV path for the CDF/bound grid")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "eta-table":
            return _cmd_eta_table(args)
        return _cmd_analyze(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


def _load(args):
    cfg = parse_scenario(args.config)
    spec = cfg.spec
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed)
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    try:
        spec.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = args.out or cfg.out
    if not out:
        raise ConfigError("no output path; pass --out or set out= in the config")
    return spec, out


def _cmd_sweep(args) -> int:
    spec, out = _load(args)
    t0 = time.perf_counter()
    result = run_sweep(spec)
    result.to_csv(out)
    elapsed = time.perf_counter() - t0
    print(
        f"wrote {len(result.rows)} rows to {out} "
        f"({spec.mode} mode, {spec.trials} trials/point, seed {spec.master_seed}, "
        f"{elapsed:.1f}s)"
    )
    return 0


def _cmd_eta_table(args) -> int:
    spec, out = _load(args)
    t0 = time.perf_counter()
    try:
        table = find_optimal_eta(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    table.to_csv(out)
    elapsed = time.perf_counter() - t0
    print(f"wrote {len(table.entries)} (K, N) entries to {out} ({elapsed:.1f}s)")
    for (K, N), (eta, rate) in sorted(table.entries.items()):
        print(f"  K={K} N={N}: best eta_I = {eta:g} (rate {rate:.4f} b/use/cell)")
    return 0


def _cmd_analyze(args) -> int:
    K = args.K
    if K < 2:
        print("analyze needs K >= 2", file=sys.stderr)
        return 2
    if not 0 < args.x_step <= args.x_max < 2:
        print("grid must satisfy 0 < x-step <= x-max < 2", file=sys.stderr)
        return 2

    x = np.round(np.arange(args.x_step, args.x_max + args.x_step / 2, args.x_step), 10)
    cdf = np.asarray(chi2_cdf(K, x))
    bound = np.asarray(chi2_cdf_poly_bound(K, x))
    ok = bound <= cdf
    print(f"CDF vs polynomial bound, K={K}, {len(x)} grid points in (0, {args.x_max}]")
    print(f"  bound <= CDF at every point: {bool(ok.all())}")
    worst = int(np.argmin(cdf - bound))
    print(f"  smallest margin {cdf[worst] - bound[worst]:.3e} at x={x[worst]:g}")
    if args.out:
        records = [[xv, cv, bv] for xv, cv, bv in zip(x, cdf, bound)]
        write_csv_atomic(args.out, ["x", "chi2_cdf", "poly_bound"], records)
        print(f"  grid written to {args.out}")

    eta_tr = args.eta_tr if args.eta_tr is not None else eta_tr_for(args.N, args.epsilon)
    params = DosParams(eta_tr=eta_tr, eta_I=args.eta_i, epsilon=args.epsilon)
    snr = 10.0 ** (args.snr_db / 10.0)
    analytic = prob_at_least_one(K, args.N, snr, params)
    rng = np.random.default_rng(args.seed)
    empirical = mc_at_least_one(K, args.N, snr, params, args.trials, rng)
    sigma = max(np.sqrt(analytic * (1.0 - analytic) / args.trials), 1e-12)
    dev = abs(empirical - analytic) / sigma
    print(
        f"at-least-one qualifier, K={K} N={args.N} snr={args.snr_db:g} dB "
        f"eta_tr={eta_tr:.4g} eta_I={args.eta_i:g}:"
    )
    print(
        f"  closed form {analytic:.6f}, Monte Carlo {empirical:.6f} "
        f"({args.trials} trials, {dev:.2f} binomial sigmas apart)"
    )
    print(f"  per-user qualification probability {qualification_probability(K, snr, params):.3e}")

    grid = 10.0 ** np.arange(1, 7)
    print("no-qualifier probability trends along x = 10^1 .. 10^6:")
    for label, f in (
        ("f(x) = 1/x", lambda v: 1.0 / v),
        ("f(x) = 2/x", lambda v: 2.0 / v),
        ("f(x) = x^(-1/2)", lambda v: v**-0.5),
    ):
        trend = all_fail_trend(f, grid)
        first, last = trend.all_fail_prob[0], trend.all_fail_prob[-1]
        growth = trend.expected_successes[-1] / trend.expected_successes[0]
        print(
            f"  {label}: all-fail {first:.3g} -> {last:.3g}, "
            f"expected successes grew {growth:g}x"
        )
    return 0
