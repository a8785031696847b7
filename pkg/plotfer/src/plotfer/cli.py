"""plot-fer command line entry point.

Exit codes: 0 success, 2 bad input (malformed CSV, label/csv count
mismatch), 3 when writing the figure fails.
"""

from __future__ import annotations

import argparse
import sys

from .plots import PlotDataError, PlotSpec, auto_label, dump_lines, render


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="plot-fer",
        description="Plot FER curves from simulation sweep CSVs.",
    )
    parser.add_argument("--csv", action="append", required=True, metavar="PATH",
                        help="sweep CSV to plot; repeat for multiple curves")
    parser.add_argument("--label", action="append", metavar="TEXT",
                        help="legend label, one per --csv; default comes from "
                             "the CSV's JSON sidecar or its file name")
    parser.add_argument("--out", default="fer.png", metavar="PATH",
                        help="output image path (default: %(default)s)")
    parser.add_argument("--ymin", type=float, default=None)
    parser.add_argument("--ymax", type=float, default=None)
    parser.add_argument("--dump-data", action="store_true",
                        help="print the plotted (ebno_db, fer) pairs to stdout")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)

    if args.label is not None and len(args.label) != len(args.csv):
        print(
            f"error: got {len(args.label)} --label values for "
            f"{len(args.csv)} --csv values",
            file=sys.stderr,
        )
        return 2
    labels = args.label or [auto_label(p) for p in args.csv]

    y_limits = None
    if (args.ymin is None) != (args.ymax is None):
        print("error: --ymin and --ymax must be given together", file=sys.stderr)
        return 2
    if args.ymin is not None:
        y_limits = (args.ymin, args.ymax)

    try:
        spec = PlotSpec(
            csv_paths=tuple(args.csv),
            labels=tuple(labels),
            out_path=args.out,
            y_limits=y_limits,
        )
        report = render(spec)
    except (PlotDataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3

    if args.dump_data:
        for line in dump_lines(report.series):
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
