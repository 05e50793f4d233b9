"""Command line entry point for rendering figures from experiment CSVs.

Reads one table, works out whether it is a sweep or a trajectory table
from the header, and renders the matching panels:

    python3 plots/make_figures.py --input runs/sweep.csv --out figs
    python3 plots/make_figures.py --input runs/traj.csv --out figs --bits 2,4 --axes 1,3

Prints one line per written file. Exits nonzero on empty or
incompatible input.
"""

from __future__ import annotations

import argparse
import sys

import figures


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError(f"empty integer list: {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="make_figures",
        description="Render SVG panels from a sweep or trajectory CSV.",
    )
    parser.add_argument("--input", required=True, help="CSV table to read")
    parser.add_argument("--out", required=True, help="directory for the SVG files")
    parser.add_argument(
        "--panels",
        type=str,
        default=None,
        help="sweep tables only: comma list of value columns to plot "
        "(default rel_err_A,rel_err_B,mpc_cost)",
    )
    parser.add_argument(
        "--bits",
        type=parse_int_list,
        default=None,
        help="trajectory tables only: word lengths to plot (default: all present)",
    )
    parser.add_argument(
        "--axes",
        type=parse_int_list,
        default=(1, 2),
        help="trajectory tables only: pair of state indices for the plane (default 1,2)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        header, _ = figures.read_table(args.input)
        kind = figures.detect_table_kind(header)
        if kind == "sweep":
            columns = (
                figures.SWEEP_VALUE_COLUMNS
                if args.panels is None
                else tuple(p.strip() for p in args.panels.split(",") if p.strip())
            )
            written = figures.plot_error_panels(args.input, args.out, columns=columns)
        else:
            if len(args.axes) != 2:
                raise figures.SchemaMismatch(
                    f"--axes needs exactly two indices, got {list(args.axes)}"
                )
            written = figures.plot_phase_portraits(
                args.input, args.out, bits=args.bits, axes=(args.axes[0], args.axes[1])
            )
    except (figures.SchemaMismatch, figures.EmptyInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"figure: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
