"""Command line entry point: render one figure from one CSV file.

Exit codes follow the simulator's convention: 0 on success, 1 for I/O
failures (unreadable input, unwritable output), 2 for bad requests
(unknown kind, missing columns, empty selection).
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dosplot",
        description="Render a figure from a simulator sweep or threshold-table CSV.",
    )
    parser.add_argument("--csv", required=True, help="input CSV written by the simulator")
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure type")
    parser.add_argument("--out", required=True, help="output image path (png, pdf, svg)")
    parser.add_argument("--k", type=int, default=None, help="keep only this cell count")
    parser.add_argument("--n", type=int, default=None, help="keep only this user count")
    parser.add_argument("--title", default=None, help="override the default title")
    parser.add_argument("--dpi", type=int, default=150, help="raster resolution")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        csv=args.csv,
        out=args.out,
        title=args.title,
        dpi=args.dpi,
        K=args.k,
        N=args.n,
    )
    try:
        info = render(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {info['out']} ({info['n_curves']} curves, {info['n_points']} points)")
    if "peak" in info:
        for label, (eta, rate) in sorted(info["peak"].items()):
            print(f"peak {label}: eta_I={eta:.10g} rate={rate:.10g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
