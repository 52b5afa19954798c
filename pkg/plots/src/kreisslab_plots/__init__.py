"""Offline figure generation from kreisslab CSV/JSON artifacts."""

from .render import (FIGURE_KINDS, PlotInputError, PlotSpec, build_figure,
                     parse_fit_json, parse_report_json, parse_resolvent_csv,
                     parse_trajectory_csv, render)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS",
    "PlotInputError",
    "PlotSpec",
    "build_figure",
    "parse_fit_json",
    "parse_report_json",
    "parse_resolvent_csv",
    "parse_trajectory_csv",
    "render",
]
