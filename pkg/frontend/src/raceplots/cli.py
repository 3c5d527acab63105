"""Command-line entry points, one per figure family.

Shared flags: ``--input`` (repeatable where a figure draws one line per
file), ``--out``, ``--value-column``, and ``--regions`` for the families
that draw analytical boundaries.  Exit codes: 0 success, 2 input
validation failure (message names the offending column or flag), 3 I/O
failure.  Standard output carries one JSON summary line.
"""

import argparse
import json
import sys

from .figures import FigureSpec, render
from .io import PlotDataError


def _execute(build_spec, argv) -> int:
    try:
        spec = build_spec(argv)
        info = render(spec)
    except PlotDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(info, sort_keys=True))
    return 0


def _base_parser(prog, help_value, multi_input=False):
    parser = argparse.ArgumentParser(prog=prog)
    if multi_input:
        parser.add_argument("--input", action="append", required=True,
                            help="input CSV; repeat for one line per file")
    else:
        parser.add_argument("--input", required=True, help="input CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--value-column", default=help_value,
                        help=f"value column to plot (default {help_value})")
    return parser


def _inputs(args):
    value = args.input
    return tuple(value) if isinstance(value, list) else (value,)


def main_heatmap(argv=None) -> int:
    def build(argv):
        parser = _base_parser("plot-heatmap", "au_freq_all")
        parser.add_argument("--x", required=True, help="column for the x axis")
        parser.add_argument("--y", required=True, help="column for the y axis")
        parser.add_argument("--regions", default=None,
                            help="regions CSV with boundary curves to overlay")
        args = parser.parse_args(argv)
        return FigureSpec("heatmap", _inputs(args), args.out, x=args.x,
                          y=args.y, value_column=args.value_column,
                          regions=args.regions)

    return _execute(build, argv)


def main_scan(argv=None) -> int:
    def build(argv):
        parser = _base_parser("plot-scan", "au_freq_all", multi_input=True)
        parser.add_argument("--x", default="p_r", help="column for the x axis")
        parser.add_argument("--regions", default=None,
                            help="regions CSV with boundary values to mark")
        args = parser.parse_args(argv)
        return FigureSpec("scan", _inputs(args), args.out, x=args.x,
                          value_column=args.value_column, regions=args.regions)

    return _execute(build, argv)


def main_zealots(argv=None) -> int:
    def build(argv):
        parser = _base_parser("plot-zealots", "au_freq_all", multi_input=True)
        args = parser.parse_args(argv)
        return FigureSpec("zealots", _inputs(args), args.out,
                          value_column=args.value_column)

    return _execute(build, argv)


def main_timeseries(argv=None) -> int:
    def build(argv):
        parser = _base_parser("plot-timeseries", "au_all")
        args = parser.parse_args(argv)
        return FigureSpec("timeseries", _inputs(args), args.out,
                          value_column=args.value_column)

    return _execute(build, argv)
