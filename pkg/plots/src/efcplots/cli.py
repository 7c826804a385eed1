"""Command-line front end: ``efcplot render <csv> --mode <m> -o <img>``."""

from __future__ import annotations

import argparse
import sys

from .render import MODES, PlotSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efcplot", description="Render an efcbound CSV report to a figure."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one CSV to one image")
    p_render.add_argument("csv", help="path to the report CSV")
    p_render.add_argument("--mode", required=True, choices=MODES)
    p_render.add_argument("-o", "--output", required=True, help="image path (.png/.svg/.pdf)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        out = render(PlotSpec(csv_path=args.csv, output_path=args.output, mode=args.mode))
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"figure written: {out}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
