"""Acceptance suite: every criterion at its stated tolerance and runtime.

Each test prints one PASS line on success (visible with ``pytest -s`` or in
the failure output otherwise); assertions carry the stated tolerances.
The wave fixture is executed twice through the real CLI so that the
desk-scale reproduction and byte-determinism criteria share the cost.
"""

import json
import math
import shutil
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from kreisslab import (build_diagonal, build_jordan, build_wave, euclidean_form, growth_fit,
                       plancherel_check, power_bound_check, resolvent_to_cesaro_check,
                       semigroup_norm, shifted, sqrt_log_bound_check, trajectory,
                       WaveTruncationParams)
from kreisslab import cli

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "configs"

WAVE_RUNTIME_LIMIT = 600.0


def _announce(name: str, elapsed: float) -> None:
    print(f"ACCEPTANCE PASS {name} ({elapsed:.2f}s)")


@pytest.fixture(scope="module")
def wave_runs(tmp_path_factory):
    """Run the wave fixture twice through the CLI; reused by two criteria."""
    base = tmp_path_factory.mktemp("wave-demo")
    runs = []
    for tag in ("first", "second"):
        out = base / tag
        start = time.monotonic()
        proc = subprocess.run(
            [sys.executable, "-m", "kreisslab", "run", str(CONFIGS / "wave8.json"),
             "--out", str(out)],
            capture_output=True, text=True, cwd=REPO,
        )
        elapsed = time.monotonic() - start
        runs.append({"out": out, "exit": proc.returncode, "elapsed": elapsed,
                     "stdout": proc.stdout, "stderr": proc.stderr})
    return runs


class TestScalarPlancherelOracle:
    def test_both_scalar_cases_within_1e4(self):
        start = time.monotonic()
        one = plancherel_check(build_diagonal([1.0]), 1.0, np.array([1.0 + 0j]), 1e-5)
        assert one.left == pytest.approx(math.pi / 2.0, rel=1e-4)
        assert one.right == pytest.approx(math.pi / 2.0, rel=1e-4)
        assert one.passed
        zero = plancherel_check(build_diagonal([0.0]), 1.0, np.array([1.0 + 0j]), 1e-5)
        assert zero.left == pytest.approx(math.pi, rel=1e-4)
        assert zero.right == pytest.approx(math.pi, rel=1e-4)
        assert zero.passed
        elapsed = time.monotonic() - start
        assert elapsed < 1.0
        _announce("scalar-plancherel-oracle", elapsed)


class TestClosedFormPropagation:
    def test_jordan_norm_and_semigroup_law(self):
        import scipy.linalg as sla
        start = time.monotonic()
        got = semigroup_norm(build_jordan(0.0, 2), 2.0)
        assert got == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-8)

        fixtures = [
            (build_diagonal([1.0]), [(0.3, 0.7), (1.5, 2.5), (6.0, 10.0)]),
            (build_jordan(0.0, 2), [(0.3, 0.7), (1.5, 2.5), (6.0, 10.0)]),
            (build_wave(WaveTruncationParams(8, 8)), [(0.6, 1.1), (3.0, 5.0)]),
        ]
        for sysm, pairs in fixtures:
            a_eu = euclidean_form(sysm)
            for s, t in pairs:
                whole = sla.expm(-(s + t) * a_eu)
                first = sla.expm(-s * a_eu)
                second = sla.expm(-t * a_eu)
                resid = np.linalg.norm(whole - first @ second, 2)
                scale = max(1.0, np.linalg.norm(first, 2) * np.linalg.norm(second, 2))
                assert resid <= 1e-8 * scale, (sysm.label, s, t)
        elapsed = time.monotonic() - start
        assert elapsed < 5.0
        _announce("closed-form-propagation", elapsed)


class TestSqrtLogBoundVerifier:
    def test_three_systems_all_horizons(self):
        start = time.monotonic()
        horizons = [4.0, 8.0, 16.0, 32.0, 64.0]
        systems = [
            build_diagonal([0.0]),
            build_diagonal([1j * k for k in range(-8, 9)]),
            shifted(build_wave(WaveTruncationParams(4, 4)), 0.5),
        ]
        for sysm in systems:
            entry = sqrt_log_bound_check(sysm, 1.0, horizons)
            assert entry.passed, (sysm.label, entry.worst_margin)
            assert entry.worst_margin <= 1.05
        elapsed = time.monotonic() - start
        assert elapsed < 120.0
        _announce("sqrt-log-bound-verifier", elapsed)


class TestPowerBoundVerifier:
    def test_jordan_alpha_two_with_measured_growth(self):
        start = time.monotonic()
        sysm = build_jordan(0.0, 2)
        entry = power_bound_check(sysm, 2.0, [4.0, 16.0, 64.0])
        assert entry.passed
        assert entry.worst_margin <= 1.05

        grid = np.geomspace(4.0, 64.0, 12)
        fit = growth_fit(trajectory(sysm, grid), "power")
        assert abs(fit.a - 1.0) <= 0.05  # actual growth ~ t, far below the t^2 bound
        elapsed = time.monotonic() - start
        assert elapsed < 10.0
        _announce("power-bound-verifier", elapsed)


class TestResolventToCesaroStep:
    def test_scalar_margins(self):
        start = time.monotonic()
        entry = resolvent_to_cesaro_check(build_diagonal([1.0]), 1.0, [2.0, 4.0, 8.0],
                                          trial_vectors=[np.array([1.0 + 0j])], tol=1e-6)
        assert entry.passed
        assert entry.worst_margin < 0.25
        row = entry.details["rows"][0]
        assert row["left"] == pytest.approx((1.0 - math.exp(-4.0)) / 2.0, rel=1e-6)
        assert row["right"] == pytest.approx(math.exp(2.0) / 3.0, rel=1e-4)
        elapsed = time.monotonic() - start
        assert elapsed < 5.0
        _announce("resolvent-to-cesaro-step", elapsed)


class TestWaveDeskScaleReproduction:
    def test_demo_completes_with_finite_constants_and_tame_exponents(self, wave_runs):
        run = wave_runs[0]
        assert run["exit"] == 0, run["stderr"][-2000:]
        assert run["elapsed"] < WAVE_RUNTIME_LIMIT
        out = run["out"]
        for name in ("resolvent.csv", "trajectory.csv", "cesaro.csv", "fit.json",
                     "report.json"):
            assert (out / name).exists(), name

        report = {e["check"]: e for e in json.loads((out / "report.json").read_text())}
        for tag in ("forward", "backward"):
            strip = report[f"strip-kreiss-{tag}"]
            assert strip["pass"]
            assert math.isfinite(strip["details"]["c_estimate"])
            assert report[f"sqrt-log-bound-{tag}"]["pass"]
            gate = report[f"growth-exponent-{tag}"]
            assert gate["pass"]
            assert gate["details"]["power_fit"]["a"] <= 1.1

        fit = json.loads((out / "fit.json").read_text())
        assert fit["model"] == "power"
        assert fit["t_min"] == 2.0 and fit["t_max"] == 30.0
        _announce("wave-desk-scale-reproduction", run["elapsed"])


class TestFixtureDeterminism:
    def test_fast_fixtures_byte_identical(self, tmp_path):
        start = time.monotonic()
        for fixture in ("scalar.json", "jordan2.json", "failing_kreiss.json"):
            out_a = tmp_path / fixture / "a"
            out_b = tmp_path / fixture / "b"
            code_a = cli.run(str(CONFIGS / fixture), str(out_a))
            code_b = cli.run(str(CONFIGS / fixture), str(out_b))
            assert code_a == code_b
            files_a = {p.name: p.read_bytes() for p in sorted(out_a.iterdir())}
            files_b = {p.name: p.read_bytes() for p in sorted(out_b.iterdir())}
            assert files_a.keys() == files_b.keys()
            for name in files_a:
                assert files_a[name] == files_b[name], f"{fixture}/{name}"
        _announce("fixture-determinism-fast", time.monotonic() - start)

    def test_wave_fixture_byte_identical(self, wave_runs):
        first, second = wave_runs
        assert first["exit"] == second["exit"] == 0
        names = sorted(p.name for p in first["out"].iterdir())
        assert names == sorted(p.name for p in second["out"].iterdir())
        for name in names:
            a = (first["out"] / name).read_bytes()
            b = (second["out"] / name).read_bytes()
            assert a == b, f"{name} differs between wave-demo reruns"
        _announce("fixture-determinism-wave", first["elapsed"] + second["elapsed"])


class TestSecondaryPlots:
    def test_render_all_three_kinds_from_wave_artifacts(self, wave_runs, tmp_path):
        exe = shutil.which("kreisslab-plots")
        if exe is None:
            pytest.skip("plots package not installed")
        out = wave_runs[0]["out"]
        assert wave_runs[0]["exit"] == 0
        jobs = [
            ["heatmap", str(out / "resolvent.csv"), "-o", str(tmp_path / "heat.png")],
            ["growth", str(out / "trajectory.csv"), str(out / "fit.json"),
             "-o", str(tmp_path / "growth.png"), "--logy"],
            ["margins", str(out / "report.json"), "-o", str(tmp_path / "margins.png")],
        ]
        for job in jobs:
            proc = subprocess.run([exe, *job], capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
        for name in ("heat.png", "growth.png", "margins.png"):
            path = tmp_path / name
            assert path.exists() and path.stat().st_size > 0
        _announce("secondary-plots-render", 0.0)
