"""Command-line entry point: render one plot job per invocation."""

from __future__ import annotations

import argparse
import sys

from .csvio import CsvFormatError
from .render import KINDS, PlotError, PlotJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="Render sweep-grid CSVs into trace/heatmap/panel figures",
    )
    parser.add_argument("csvs", nargs="+", help="input grid CSV path(s)")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", help="figure title (default: from metadata)")
    return parser


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(
            csv_paths=args.csvs, kind=args.kind, out_path=args.out, title=args.title
        )
        path = render(job)
    except (PlotError, CsvFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


def main():
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
