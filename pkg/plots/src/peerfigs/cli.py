"""Command line front end: render result files into figure images."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, render
from .io import EmptyInputError, ParameterError, SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render experiment result files into figure images.")
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS,
                        help="which figure to render")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="FILE",
                        help="input results CSVs (for moons-models: the "
                             "instance JSON)")
    parser.add_argument("--out", required=True,
                        help="output image path (.png, .svg, or .pdf)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        render(args.figure, args.inputs, args.out)
    except (SchemaError, EmptyInputError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
