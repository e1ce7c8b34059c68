"""Command-line entry point: plot --kind <name> --input <dir> --out <file>."""

from __future__ import annotations

import argparse
import sys

from plots.figures import FIGURES, make_figure, save_figure
from plots.io import PlotInputError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from solver output directories.")
    parser.add_argument("--kind", required=True,
                        choices=sorted(FIGURES),
                        help="figure layout to render")
    parser.add_argument("--input", required=True,
                        help="directory holding the solver's output files")
    parser.add_argument("--out", required=True,
                        help="image file to write (format from extension)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        fig = make_figure(args.kind, args.input)
        save_figure(fig, args.out)
    except PlotInputError as exc:
        print(f"plot-error: {exc}", file=sys.stderr)
        return 2
    print(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
