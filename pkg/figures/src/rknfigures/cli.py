"""Command-line entry point: render figures from benchmark CSVs."""

from __future__ import annotations

import argparse
import sys

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import FiguresError
from .render import KINDS, FigureSpec, render


def _spec_from_toml(path) -> list[FigureSpec]:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    figures = data.get("figure")
    if figures is None:
        raise FiguresError(f"{path}: no [[figure]] tables found")
    if isinstance(figures, dict):
        figures = [figures]
    specs = []
    for entry in figures:
        try:
            specs.append(
                FigureSpec(
                    kind=entry["kind"],
                    csv_paths=list(entry["csv"]) if isinstance(entry["csv"], list)
                    else [entry["csv"]],
                    output=entry["out"],
                    x_label=entry.get("x_label"),
                    y_label=entry.get("y_label"),
                    title=entry.get("title"),
                )
            )
        except KeyError as exc:
            raise FiguresError(f"{path}: figure entry missing key {exc}") from exc
    return specs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rknfigures", description="Render plots from benchmark CSV output."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure or a TOML batch")
    p.add_argument("kind", nargs="?", choices=KINDS, help="plot kind")
    p.add_argument("csv", nargs="?", help="input CSV path")
    p.add_argument("out", nargs="?", help="output image path")
    p.add_argument("--spec", help="TOML file with one or more [[figure]] tables")
    p.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.spec:
            specs = _spec_from_toml(args.spec)
        else:
            if not (args.kind and args.csv and args.out):
                print(
                    "error: either --spec or all of KIND CSV OUT are required",
                    file=sys.stderr,
                )
                return 2
            specs = [
                FigureSpec(
                    kind=args.kind, csv_paths=[args.csv], output=args.out,
                    title=args.title,
                )
            ]
        for spec in specs:
            path = render(spec)
            print(path)
    except (FiguresError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
