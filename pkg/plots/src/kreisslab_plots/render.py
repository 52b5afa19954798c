"""Batch figures from the solver's CSV/JSON artifacts.

Three figure kinds are supported: a resolvent-norm heatmap over the sampled
half-plane grid, a growth curve with the fitted model overlays, and a bar
chart of per-check margins against their slacks. Rendering never mutates its
inputs and the plotted data series are a pure function of the parsed files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

FIGURE_KINDS = ("heatmap", "growth", "margins")
IMAGE_SUFFIXES = (".png", ".svg")


class PlotInputError(Exception):
    """Unusable input file, with the offending location when known."""

    def __init__(self, path, message: str, line: int | None = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    inputs: dict = field(default_factory=dict)
    output: Path = Path("figure.png")
    x_scale: str = "linear"
    y_scale: str = "linear"

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise PlotInputError(self.output, f"unknown figure kind {self.kind!r}")
        if Path(self.output).suffix not in IMAGE_SUFFIXES:
            raise PlotInputError(self.output,
                                 f"output must end in one of {IMAGE_SUFFIXES}")
        for scale in (self.x_scale, self.y_scale):
            if scale not in ("linear", "log"):
                raise PlotInputError(self.output, f"unknown axis scale {scale!r}")


def _require(path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise PlotInputError(path, "input file not found")
    return path


def _parse_csv(path, expected_header: str) -> list[list[float]]:
    path = _require(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise PlotInputError(path, "file is empty", line=1)
    if lines[0] != expected_header:
        raise PlotInputError(path, f"expected header {expected_header!r}, got {lines[0]!r}",
                             line=1)
    columns = expected_header.count(",") + 1
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != columns:
            raise PlotInputError(path, f"expected {columns} columns, got {len(cells)}",
                                 line=lineno)
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise PlotInputError(path, str(exc), line=lineno) from None
    if not rows:
        raise PlotInputError(path, "no data rows", line=len(lines))
    return rows


def parse_resolvent_csv(path) -> np.ndarray:
    return np.array(_parse_csv(path, "re,im,sigma_min,norm"))


def parse_trajectory_csv(path) -> np.ndarray:
    return np.array(_parse_csv(path, "t,op_norm"))


def _parse_json(path):
    path = _require(path)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PlotInputError(path, exc.msg, line=exc.lineno) from None


def parse_fit_json(path) -> dict:
    fit = _parse_json(path)
    if not isinstance(fit, dict):
        raise PlotInputError(path, "expected a JSON object")
    missing = {"model", "c", "a", "omega"} - fit.keys()
    if missing:
        raise PlotInputError(path, f"missing fit fields: {sorted(missing)}")
    return fit


def parse_report_json(path) -> list[dict]:
    report = _parse_json(path)
    if not isinstance(report, list):
        raise PlotInputError(path, "expected a JSON array of checks")
    for i, entry in enumerate(report):
        if not isinstance(entry, dict) or not {"check", "worst_margin", "slack",
                                               "pass"} <= entry.keys():
            raise PlotInputError(path, f"entry {i} is not a check record")
    if not report:
        raise PlotInputError(path, "report contains no checks")
    return report


def _heatmap(spec: PlotSpec, ax) -> None:
    data = parse_resolvent_csv(spec.inputs["resolvent"])
    res = data[:, 0]
    ims = data[:, 1]
    norms = data[:, 3]
    with np.errstate(divide="ignore"):
        level = np.log10(norms)
    x_axis = np.unique(res)
    y_axis = np.unique(ims)
    if x_axis.size * y_axis.size == data.shape[0]:
        grid = np.full((y_axis.size, x_axis.size), np.nan)
        xi = np.searchsorted(x_axis, res)
        yi = np.searchsorted(y_axis, ims)
        grid[yi, xi] = level
        masked = np.ma.masked_invalid(grid)
        mesh = ax.pcolormesh(x_axis, y_axis, masked, shading="nearest", cmap="viridis")
    else:
        mesh = ax.scatter(res, ims, c=np.where(np.isfinite(level), level, np.nan),
                          cmap="viridis", s=12)
    plt.colorbar(mesh, ax=ax, label="log10 ||R(lambda)||")
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title("resolvent norm over the sampled grid")


def _growth(spec: PlotSpec, ax) -> None:
    data = parse_trajectory_csv(spec.inputs["trajectory"])
    fit = parse_fit_json(spec.inputs["fit"])
    ts = data[:, 0]
    ys = data[:, 1]
    ax.plot(ts, ys, marker="o", markersize=3, linewidth=1.0, label="measured ||T_t||")

    c, a, omega = float(fit["c"]), float(fit["a"]), float(fit["omega"])
    dense = np.linspace(ts.min(), ts.max(), 256)
    power = c * dense**a * np.exp(omega * dense)
    ax.plot(dense, power, linestyle="--", label=f"{c:.3g} t^{a:.3g}")
    loggable = dense[dense > 1.0]
    refined = (c * loggable**a * np.exp(omega * loggable)
               / np.sqrt(np.log(loggable)))
    ax.plot(loggable, refined, linestyle=":",
            label=f"{c:.3g} t^{a:.3g} / sqrt(log t)")
    ax.set_xlabel("t")
    ax.set_ylabel("operator norm")
    ax.legend()
    ax.set_title("growth curve with fitted overlays")


def _margins(spec: PlotSpec, ax) -> None:
    report = parse_report_json(spec.inputs["report"])
    names = [e["check"] for e in report]
    margins = np.array([float(e["worst_margin"]) for e in report])
    slacks = np.array([float(e["slack"]) for e in report])
    passed = [bool(e["pass"]) for e in report]

    finite = margins[np.isfinite(margins)]
    cap_pool = np.concatenate([finite, slacks[np.isfinite(slacks)], [1.0]])
    cap = 2.0 * float(np.max(cap_pool))
    heights = np.where(np.isfinite(margins), margins, cap)

    xs = np.arange(len(names))
    colors = ["#2a9d3a" if ok else "#c3423f" for ok in passed]
    ax.bar(xs, heights, color=colors, width=0.6, label="worst margin")
    ax.hlines(slacks, xs - 0.38, xs + 0.38, colors="k", linestyles="-",
              linewidth=1.4, label="slack")
    for x, margin in zip(xs, margins):
        if not math.isfinite(margin):
            ax.text(x, cap, "inf", ha="center", va="bottom", fontsize=8)
    ax.set_xticks(xs)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("margin")
    ax.legend()
    ax.set_title("check margins vs slack")


def build_figure(spec: PlotSpec):
    """Assemble the figure for a spec without writing it (pure in its inputs)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.6), dpi=130)
    if spec.kind == "heatmap":
        _heatmap(spec, ax)
    elif spec.kind == "growth":
        _growth(spec, ax)
    else:
        _margins(spec, ax)
    if spec.kind != "margins":
        ax.set_xscale(spec.x_scale)
        ax.set_yscale(spec.y_scale)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> Path:
    fig = build_figure(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out)
    finally:
        plt.close(fig)
    return out
