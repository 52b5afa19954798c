"""Command line front end: one subcommand per figure kind."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotInputError, PlotSpec, render


def _add_axis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-o", "--output", required=True, help="image path (.png or .svg)")
    parser.add_argument("--logx", action="store_true", help="logarithmic x axis")
    parser.add_argument("--logy", action="store_true", help="logarithmic y axis")


def _spec_from(args: argparse.Namespace, kind: str, inputs: dict) -> PlotSpec:
    return PlotSpec(
        kind=kind,
        inputs=inputs,
        output=Path(args.output),
        x_scale="log" if args.logx else "linear",
        y_scale="log" if args.logy else "linear",
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kreisslab-plots",
        description="Render figures from kreisslab CSV/JSON artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    heat = sub.add_parser("heatmap", help="log10 resolvent norm over the lambda grid")
    heat.add_argument("resolvent", help="resolvent.csv")
    _add_axis_flags(heat)

    growth = sub.add_parser("growth", help="trajectory with fitted model overlays")
    growth.add_argument("trajectory", help="trajectory.csv")
    growth.add_argument("fit", help="fit.json")
    _add_axis_flags(growth)

    margins = sub.add_parser("margins", help="per-check margins against slack")
    margins.add_argument("report", help="report.json")
    _add_axis_flags(margins)

    args = parser.parse_args(argv)
    try:
        if args.command == "heatmap":
            spec = _spec_from(args, "heatmap", {"resolvent": args.resolvent})
        elif args.command == "growth":
            spec = _spec_from(args, "growth",
                              {"trajectory": args.trajectory, "fit": args.fit})
        else:
            spec = _spec_from(args, "margins", {"report": args.report})
        out = render(spec)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
