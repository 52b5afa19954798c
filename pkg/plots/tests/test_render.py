import json
import math
from pathlib import Path

import numpy as np
import pytest

from kreisslab_plots import (PlotInputError, PlotSpec, build_figure, parse_report_json,
                             parse_resolvent_csv, parse_trajectory_csv, render)
from kreisslab_plots.cli import main


def fmt(x: float) -> str:
    return repr(float(x))


@pytest.fixture
def artifacts(tmp_path):
    """Synthetic files following the documented artifact schemas."""
    r_values = [0.01, 0.1, 1.0]
    betas = [-1.0, 0.0, 1.0]
    lines = ["re,im,sigma_min,norm"]
    for r in r_values:
        for b in betas:
            if r == 0.1 and b == 0.0:
                lines.append(f"{fmt(-r)},{fmt(b)},0.0,inf")  # flagged singular point
            else:
                norm = 1.0 / math.hypot(r, b)
                lines.append(f"{fmt(-r)},{fmt(b)},{fmt(1.0 / norm)},{fmt(norm)}")
    (tmp_path / "resolvent.csv").write_text("\n".join(lines) + "\n")

    ts = np.linspace(2.0, 30.0, 29)
    traj = ["t,op_norm"] + [f"{fmt(t)},{fmt(1.7 * t ** 1.1)}" for t in ts]
    (tmp_path / "trajectory.csv").write_text("\n".join(traj) + "\n")

    fit = {"model": "power", "c": 1.7, "a": 1.1, "omega": 0.0,
           "rms_residual": 0.0, "t_min": 2.0, "t_max": 30.0}
    (tmp_path / "fit.json").write_text(json.dumps(fit, indent=2) + "\n")

    report = [
        {"check": "strip-kreiss-forward", "inequality": "sup finite", "worst_margin": 0.0,
         "slack": 1.0, "pass": True, "details": {}},
        {"check": "sqrt-log-bound-forward", "inequality": "||T_t|| <= bound",
         "worst_margin": 0.30, "slack": 1.05, "pass": True, "details": {}},
        {"check": "broken-check", "inequality": "sup finite", "worst_margin": math.inf,
         "slack": 1.0, "pass": False, "details": {}},
    ]
    (tmp_path / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return tmp_path


class TestParsers:
    def test_resolvent_round_trip(self, artifacts):
        data = parse_resolvent_csv(artifacts / "resolvent.csv")
        assert data.shape == (9, 4)
        assert np.isinf(data[:, 3]).sum() == 1

    def test_parse_is_deterministic(self, artifacts):
        a = parse_trajectory_csv(artifacts / "trajectory.csv")
        b = parse_trajectory_csv(artifacts / "trajectory.csv")
        assert np.array_equal(a, b)

    def test_missing_file_diagnostic(self, tmp_path):
        with pytest.raises(PlotInputError) as err:
            parse_resolvent_csv(tmp_path / "nope.csv")
        assert "nope.csv" in str(err.value)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "trajectory.csv"
        path.write_text("t,op_norm\n2.0,1.0\n3.0,not-a-number\n")
        with pytest.raises(PlotInputError) as err:
            parse_trajectory_csv(path)
        assert err.value.line == 3

    def test_wrong_header_reports_line_one(self, tmp_path):
        path = tmp_path / "trajectory.csv"
        path.write_text("time,norm\n2.0,1.0\n")
        with pytest.raises(PlotInputError) as err:
            parse_trajectory_csv(path)
        assert err.value.line == 1

    def test_report_must_be_checks(self, tmp_path):
        path = tmp_path / "report.json"
        path.write_text(json.dumps([{"nope": 1}]))
        with pytest.raises(PlotInputError):
            parse_report_json(path)

    def test_report_with_infinity_parses(self, artifacts):
        report = parse_report_json(artifacts / "report.json")
        assert any(math.isinf(e["worst_margin"]) for e in report)


class TestFigures:
    def test_heatmap_renders(self, artifacts, tmp_path):
        out = render(PlotSpec(kind="heatmap", inputs={"resolvent": artifacts / "resolvent.csv"},
                              output=tmp_path / "heat.png"))
        assert out.exists() and out.stat().st_size > 0

    def test_growth_contains_both_overlays(self, artifacts, tmp_path):
        spec = PlotSpec(kind="growth",
                        inputs={"trajectory": artifacts / "trajectory.csv",
                                "fit": artifacts / "fit.json"},
                        output=tmp_path / "growth.png", y_scale="log")
        fig = build_figure(spec)
        lines = fig.axes[0].get_lines()
        assert len(lines) == 3  # data + power overlay + log-refined overlay
        labels = [ln.get_label() for ln in lines]
        assert any("sqrt(log t)" in lab for lab in labels)
        render(spec)
        assert (tmp_path / "growth.png").exists()

    def test_growth_overlay_matches_fit(self, artifacts, tmp_path):
        spec = PlotSpec(kind="growth",
                        inputs={"trajectory": artifacts / "trajectory.csv",
                                "fit": artifacts / "fit.json"},
                        output=tmp_path / "growth.png")
        fig = build_figure(spec)
        overlay = fig.axes[0].get_lines()[1]
        xs, ys = overlay.get_data()
        assert ys[0] == pytest.approx(1.7 * xs[0] ** 1.1, rel=1e-12)

    def test_margins_renders_failing_above_slack(self, artifacts, tmp_path):
        spec = PlotSpec(kind="margins", inputs={"report": artifacts / "report.json"},
                        output=tmp_path / "margins.png")
        fig = build_figure(spec)
        ax = fig.axes[0]
        bars = [p for p in ax.patches if p.get_width() > 0.1]
        assert len(bars) == 3
        # the infinite-margin bar is drawn above every slack line
        assert bars[2].get_height() > 1.05
        render(spec)
        assert (tmp_path / "margins.png").exists()

    def test_rerender_same_data_series(self, artifacts, tmp_path):
        spec = PlotSpec(kind="growth",
                        inputs={"trajectory": artifacts / "trajectory.csv",
                                "fit": artifacts / "fit.json"},
                        output=tmp_path / "g.png")
        first = build_figure(spec).axes[0].get_lines()
        second = build_figure(spec).axes[0].get_lines()
        for a, b in zip(first, second):
            assert np.array_equal(a.get_xdata(), b.get_xdata())
            assert np.array_equal(a.get_ydata(), b.get_ydata())

    def test_sparse_grid_falls_back_to_scatter(self, tmp_path):
        lines = ["re,im,sigma_min,norm",
                 "-0.1,0.0,1.0,1.0", "-0.2,0.5,2.0,0.5", "-0.3,-0.5,4.0,0.25"]
        path = tmp_path / "resolvent.csv"
        path.write_text("\n".join(lines) + "\n")
        out = render(PlotSpec(kind="heatmap", inputs={"resolvent": path},
                              output=tmp_path / "sparse.png"))
        assert out.exists()

    def test_svg_output(self, artifacts, tmp_path):
        out = render(PlotSpec(kind="heatmap", inputs={"resolvent": artifacts / "resolvent.csv"},
                              output=tmp_path / "heat.svg"))
        assert out.suffix == ".svg" and out.stat().st_size > 0

    def test_spec_validation(self, tmp_path):
        with pytest.raises(PlotInputError):
            PlotSpec(kind="pie", inputs={}, output=tmp_path / "x.png")
        with pytest.raises(PlotInputError):
            PlotSpec(kind="heatmap", inputs={}, output=tmp_path / "x.bmp")


class TestCli:
    def test_all_three_kinds(self, artifacts, tmp_path):
        assert main(["heatmap", str(artifacts / "resolvent.csv"),
                     "-o", str(tmp_path / "h.png")]) == 0
        assert main(["growth", str(artifacts / "trajectory.csv"),
                     str(artifacts / "fit.json"), "-o", str(tmp_path / "g.png"),
                     "--logy"]) == 0
        assert main(["margins", str(artifacts / "report.json"),
                     "-o", str(tmp_path / "m.png")]) == 0
        for name in ("h.png", "g.png", "m.png"):
            assert (tmp_path / name).stat().st_size > 0

    def test_missing_input_nonzero_exit(self, tmp_path, capsys):
        assert main(["heatmap", str(tmp_path / "absent.csv"),
                     "-o", str(tmp_path / "h.png")]) == 1
        assert "absent.csv" in capsys.readouterr().err

    def test_parse_error_names_line(self, tmp_path, capsys):
        bad = tmp_path / "trajectory.csv"
        bad.write_text("t,op_norm\nx,y\n")
        assert main(["growth", str(bad), str(tmp_path / "fit.json"),
                     "-o", str(tmp_path / "g.png")]) == 1
        err = capsys.readouterr().err
        assert "trajectory.csv:2" in err
