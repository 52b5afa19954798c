"""Batch front end: JSON experiment configs in, CSV/JSON artifacts out.

Exit codes: 0 all checks pass, 1 some verification failed (report still
written), 2 configuration or schema error, 3 numerical failure (quadrature
cap or singular contour). Data files contain no timestamps and use
round-trip decimal formatting, so reruns of the same config are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys as _sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds
from .errors import ConfigurationError, NumericalFailureError, ResolventUndefinedError
from .linalg import default_trial_vectors
from .operators import (OperatorSystem, WaveTruncationParams, build_diagonal, build_jordan,
                        build_wave, reversed_system, shifted, system)
from .propagator import cesaro_constants, trajectory
from .report import CheckEntry, VerificationReport
from .resolvent import GridSpec, default_grid, sweep

STAGES = ("resolvent-sweep", "kreiss", "cesaro", "verify-identities",
          "verify-theorem", "fit-growth", "wave-demo")

OUTPUT_ENV_VAR = "KREISSLAB_OUT"

_DEFAULT_T_GRID = (4.0, 8.0, 16.0, 32.0, 64.0)
_IDENTITY_MAX_R = 5


class ConfigError(ConfigurationError):
    """Schema violation carrying the offending field path."""

    def __init__(self, path: str, message: str):
        self.field_path = path
        super().__init__(f"config error at {path}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    label: str
    operator_spec: dict
    system: OperatorSystem
    alpha: float
    r_axis: tuple[float, float, int, str]
    beta_axis: tuple[float, float, int, str] | None
    t_grid: tuple[float, ...]
    quad_tol: float
    stages: tuple[str, ...]
    output_dir: str | None
    workers: int | None
    fit_model: str
    fit_omega: float | None
    wave: bounds.WaveDemoConfig | None
    wave_t_max: float | None


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(path, message)


def _number(value, path: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool), path,
            f"expected a number, got {type(value).__name__}")
    _expect(math.isfinite(float(value)), path, "must be finite")
    return float(value)


def _integer(value, path: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path,
            f"expected an integer, got {type(value).__name__}")
    return int(value)


def _complex_pair(value, path: str) -> complex:
    _expect(isinstance(value, (list, tuple)) and len(value) == 2, path,
            "expected a [re, im] pair")
    return complex(_number(value[0], path + "[0]"), _number(value[1], path + "[1]"))


def _build_operator(spec, path: str = "operator") -> tuple[OperatorSystem, dict]:
    _expect(isinstance(spec, dict), path, "expected an object")
    _expect("kind" in spec, path + ".kind", "missing required key")
    kind = spec["kind"]
    known = ("diagonal", "jordan", "wave", "matrix")
    _expect(kind in known, path + ".kind", f"expected one of {known}, got {kind!r}")

    allowed = {"kind", "shift", "reversed"}
    if kind == "diagonal":
        allowed |= {"eigs"}
        _expect("eigs" in spec, path + ".eigs", "missing required key")
        eigs_spec = spec["eigs"]
        _expect(isinstance(eigs_spec, list) and eigs_spec, path + ".eigs",
                "expected a nonempty array")
        eigs = [_complex_pair(e, f"{path}.eigs[{i}]") for i, e in enumerate(eigs_spec)]
        try:
            built = build_diagonal(eigs)
        except ConfigurationError as exc:
            raise ConfigError(path + ".eigs", str(exc)) from None
    elif kind == "jordan":
        allowed |= {"eig", "size"}
        _expect("eig" in spec, path + ".eig", "missing required key")
        _expect("size" in spec, path + ".size", "missing required key")
        size = _integer(spec["size"], path + ".size")
        try:
            built = build_jordan(_complex_pair(spec["eig"], path + ".eig"), size)
        except ConfigurationError as exc:
            raise ConfigError(path, str(exc)) from None
    elif kind == "wave":
        allowed |= {"nx", "ny"}
        _expect("nx" in spec, path + ".nx", "missing required key")
        _expect("ny" in spec, path + ".ny", "missing required key")
        nx = _integer(spec["nx"], path + ".nx")
        ny = _integer(spec["ny"], path + ".ny")
        try:
            built = build_wave(WaveTruncationParams(nx=nx, ny=ny))
        except ConfigurationError as exc:
            raise ConfigError(path, str(exc)) from None
    else:
        allowed |= {"matrix", "weight"}
        _expect("matrix" in spec, path + ".matrix", "missing required key")
        rows_spec = spec["matrix"]
        _expect(isinstance(rows_spec, list) and rows_spec, path + ".matrix",
                "expected a nonempty array of rows")
        rows = []
        for i, row in enumerate(rows_spec):
            _expect(isinstance(row, list) and len(row) == len(rows_spec),
                    f"{path}.matrix[{i}]", "matrix must be square")
            rows.append([_complex_pair(v, f"{path}.matrix[{i}][{j}]")
                         for j, v in enumerate(row)])
        weight = None
        if spec.get("weight") is not None:
            wspec = spec["weight"]
            _expect(isinstance(wspec, list) and len(wspec) == len(rows), path + ".weight",
                    f"expected an array of length {len(rows)}")
            weight = [_number(v, f"{path}.weight[{i}]") for i, v in enumerate(wspec)]
        try:
            built = system(np.array(rows, dtype=complex), weight=weight)
        except ConfigurationError as exc:
            raise ConfigError(path, str(exc)) from None

    for key in spec:
        _expect(key in allowed, f"{path}.{key}", "unknown key")

    if spec.get("reversed", False):
        _expect(isinstance(spec["reversed"], bool), path + ".reversed", "expected a boolean")
        built = reversed_system(built)
    if "shift" in spec:
        built = shifted(built, _number(spec["shift"], path + ".shift"))
    return built, dict(spec)


def _axis_spec(value, path: str, default_spacing: str) -> tuple[float, float, int, str]:
    _expect(isinstance(value, dict), path, "expected an object with min/max/count")
    for key in value:
        _expect(key in ("min", "max", "count", "spacing"), f"{path}.{key}", "unknown key")
    for key in ("min", "max", "count"):
        _expect(key in value, f"{path}.{key}", "missing required key")
    lo = _number(value["min"], path + ".min")
    hi = _number(value["max"], path + ".max")
    count = _integer(value["count"], path + ".count")
    _expect(count >= 1, path + ".count", "must be >= 1")
    spacing = value.get("spacing", default_spacing)
    _expect(spacing in ("log", "linear"), path + ".spacing", "expected 'log' or 'linear'")
    return lo, hi, count, spacing


def _parse_t_grid(value, path: str) -> tuple[float, ...]:
    if isinstance(value, list):
        _expect(bool(value), path, "expected a nonempty array")
        ts = tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))
        _expect(all(b > a for a, b in zip(ts, ts[1:])), path, "must be strictly increasing")
        return ts
    lo, hi, count, spacing = _axis_spec(value, path, "linear")
    _expect(lo > 0.0 or spacing == "linear", path, "log spacing needs min > 0")
    if count == 1:
        return (lo,)
    if spacing == "log":
        return tuple(float(t) for t in np.geomspace(lo, hi, count))
    return tuple(float(t) for t in np.linspace(lo, hi, count))


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(str(path), "config file not found")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    _expect(isinstance(raw, dict), "$", "top level must be an object")

    known_keys = {"label", "operator", "alpha", "grids", "tolerances", "stages",
                  "output_dir", "workers", "fit", "wave"}
    for key in raw:
        _expect(key in known_keys, key, "unknown key")

    _expect("operator" in raw, "operator", "missing required key")
    built, op_spec = _build_operator(raw["operator"])

    _expect("alpha" in raw, "alpha", "missing required key")
    alpha = _number(raw["alpha"], "alpha")
    _expect(alpha > 0.0, "alpha", "must be positive")

    _expect("stages" in raw, "stages", "missing required key")
    stages_raw = raw["stages"]
    _expect(isinstance(stages_raw, list) and stages_raw, "stages", "expected a nonempty array")
    for i, name in enumerate(stages_raw):
        _expect(name in STAGES, f"stages[{i}]", f"unknown stage {name!r}")
    stages = tuple(s for s in STAGES if s in stages_raw)

    grids = raw.get("grids", {})
    _expect(isinstance(grids, dict), "grids", "expected an object")
    for key in grids:
        _expect(key in ("r", "beta", "t"), f"grids.{key}", "unknown key")

    if "r" in grids:
        r_axis = _axis_spec(grids["r"], "grids.r", "log")
        _expect(r_axis[0] > 0.0, "grids.r.min", "must be positive")
    else:
        r_axis = (1e-3, 1.0, 60, "log")

    beta_axis = None
    if "beta" in grids:
        beta_axis = _axis_spec(grids["beta"], "grids.beta", "linear")
        try:
            # validate the full grid eagerly; the run reuses this construction
            GridSpec(r_min=r_axis[0], r_max=r_axis[1], r_count=r_axis[2],
                     r_spacing=r_axis[3], beta_min=beta_axis[0], beta_max=beta_axis[1],
                     beta_count=beta_axis[2], beta_spacing=beta_axis[3])
        except ConfigurationError as exc:
            raise ConfigError("grids", str(exc)) from None

    t_grid = _parse_t_grid(grids["t"], "grids.t") if "t" in grids else _DEFAULT_T_GRID

    tolerances = raw.get("tolerances", {})
    _expect(isinstance(tolerances, dict), "tolerances", "expected an object")
    for key in tolerances:
        _expect(key == "quadrature", f"tolerances.{key}", "unknown key")
    quad_tol = _number(tolerances.get("quadrature", 1e-6), "tolerances.quadrature")
    _expect(quad_tol > 0.0, "tolerances.quadrature", "must be positive")

    workers = None
    if raw.get("workers") is not None:
        workers = _integer(raw["workers"], "workers")
        _expect(workers >= 1, "workers", "must be >= 1")

    fit_spec = raw.get("fit", {})
    _expect(isinstance(fit_spec, dict), "fit", "expected an object")
    for key in fit_spec:
        _expect(key in ("model", "omega"), f"fit.{key}", "unknown key")
    fit_model = fit_spec.get("model", "power")
    _expect(fit_model in bounds.GROWTH_MODELS, "fit.model",
            f"expected one of {bounds.GROWTH_MODELS}")
    fit_omega = None
    if fit_spec.get("omega") is not None:
        fit_omega = _number(fit_spec["omega"], "fit.omega")
    _expect(fit_model != "shifted" or fit_omega is not None, "fit.omega",
            "the shifted model needs omega")

    wave_cfg = None
    wave_t_max = None
    if "wave-demo" in stages:
        _expect(op_spec.get("kind") == "wave", "operator.kind",
                "wave-demo requires a wave operator")
        wave_spec = raw.get("wave", {})
        _expect(isinstance(wave_spec, dict), "wave", "expected an object")
        known = {"t_max", "r_min", "r_max", "r_count", "beta_count", "trajectory_step"}
        for key in wave_spec:
            _expect(key in known, f"wave.{key}", "unknown key")
        _expect("t_max" in wave_spec, "wave.t_max", "missing required key")
        wave_t_max = _number(wave_spec["t_max"], "wave.t_max")
        _expect(wave_t_max >= 8.0, "wave.t_max", "must be at least 8")
        kwargs = {}
        if "r_min" in wave_spec:
            kwargs["r_min"] = _number(wave_spec["r_min"], "wave.r_min")
        if "r_max" in wave_spec:
            kwargs["r_max"] = _number(wave_spec["r_max"], "wave.r_max")
        if "r_count" in wave_spec:
            kwargs["r_count"] = _integer(wave_spec["r_count"], "wave.r_count")
        if "beta_count" in wave_spec:
            kwargs["beta_count"] = _integer(wave_spec["beta_count"], "wave.beta_count")
        if "trajectory_step" in wave_spec:
            kwargs["trajectory_step"] = _number(wave_spec["trajectory_step"],
                                                "wave.trajectory_step")
        wave_cfg = bounds.WaveDemoConfig(quad_rel_tol=quad_tol, workers=workers, **kwargs)
        _expect(0.0 < wave_cfg.r_min < 1.0, "wave.r_min", "must lie in (0, 1)")
        _expect(0.0 < wave_cfg.r_max < 1.0, "wave.r_max", "must lie in (0, 1)")
        _expect(wave_cfg.r_min <= wave_cfg.r_max, "wave.r_min", "must not exceed r_max")

    label = raw.get("label", built.label)
    _expect(isinstance(label, str), "label", "expected a string")

    output_dir = raw.get("output_dir")
    if output_dir is not None:
        _expect(isinstance(output_dir, str), "output_dir", "expected a string")

    cfg = ExperimentConfig(
        label=label, operator_spec=op_spec, system=built, alpha=alpha, r_axis=r_axis,
        beta_axis=beta_axis, t_grid=t_grid, quad_tol=quad_tol, stages=stages,
        output_dir=output_dir, workers=workers, fit_model=fit_model,
        fit_omega=fit_omega, wave=wave_cfg, wave_t_max=wave_t_max,
    )
    _validate_stage_grids(cfg)
    return cfg


def _validate_stage_grids(cfg: ExperimentConfig) -> None:
    ts = cfg.t_grid
    if "cesaro" in cfg.stages or "verify-identities" in cfg.stages:
        _expect(all(t > 1.0 for t in ts), "grids.t",
                "time-average stages need every t > 1")
    if "verify-theorem" in cfg.stages:
        if cfg.alpha <= 1.0:
            _expect(all(t > 2.0 for t in ts), "grids.t",
                    "the growth-bound stage needs every t > 2 when alpha <= 1")
        else:
            _expect(all(t > 3.0 for t in ts), "grids.t",
                    "the growth-bound stage needs every t > 3 when alpha > 1")
    if "fit-growth" in cfg.stages:
        _expect(sum(1 for t in ts if t >= 2.0) >= 3, "grids.t",
                "growth fitting needs at least three t values >= 2")


def _resolve_grid(cfg: ExperimentConfig) -> GridSpec:
    """Combine the configured r axis with the beta axis, deriving the latter
    from the operator norm when the config leaves it out."""
    if cfg.beta_axis is not None:
        beta = cfg.beta_axis
    else:
        auto = default_grid(cfg.system)
        beta = (auto.beta_min, auto.beta_max, auto.beta_count, auto.beta_spacing)
    return GridSpec(r_min=cfg.r_axis[0], r_max=cfg.r_axis[1], r_count=cfg.r_axis[2],
                    r_spacing=cfg.r_axis[3], beta_min=beta[0], beta_max=beta[1],
                    beta_count=beta[2], beta_spacing=beta[3])


def _fmt(value) -> str:
    value = float(value)
    return repr(value)


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_resolvent_csv(path: Path, samples) -> None:
    _write_csv(path, "re,im,sigma_min,norm",
               ((s.lam.real, s.lam.imag, s.sigma_min, s.norm) for s in samples))


def write_trajectory_csv(path: Path, samples) -> None:
    _write_csv(path, "t,op_norm", ((s.t, s.op_norm) for s in samples))


def write_cesaro_csv(path: Path, per_t_rows) -> None:
    _write_csv(path, "t,lambda_max,C_primal_t,C_adjoint_t",
               ((row["t"], row["lambda_max"], row["c_primal_t"], row["c_adjoint_t"])
                for row in per_t_rows))


def write_fit_json(path: Path, fit: bounds.GrowthFitResult) -> None:
    path.write_text(json.dumps(fit.to_dict(), indent=2) + "\n")


@dataclass
class RunState:
    report: VerificationReport = field(default_factory=VerificationReport)
    samples: list | None = None
    numerical_failure: bool = False


def _emit(entry, state: RunState) -> None:
    state.report.add(entry)
    print(entry.summary_line())


def _thin(values, cap: int):
    values = list(values)
    if len(values) <= cap:
        return values
    idx = np.linspace(0, len(values) - 1, cap).round().astype(int)
    return [values[i] for i in sorted(set(idx.tolist()))]


def execute(cfg: ExperimentConfig, out_dir: Path) -> RunState:
    state = RunState()
    sysm = cfg.system
    out_dir.mkdir(parents=True, exist_ok=True)

    for stage in cfg.stages:
        if stage == "resolvent-sweep":
            grid = _resolve_grid(cfg)
            state.samples = sweep(sysm, grid.r_values(), grid.beta_values(),
                                  workers=cfg.workers)
            write_resolvent_csv(out_dir / "resolvent.csv", state.samples)
            print(f"stage resolvent-sweep: {len(state.samples)} samples")

        elif stage == "kreiss":
            if state.samples is None:
                grid = _resolve_grid(cfg)
                state.samples = sweep(sysm, grid.r_values(), grid.beta_values(),
                                      workers=cfg.workers)
                write_resolvent_csv(out_dir / "resolvent.csv", state.samples)
            entry = bounds.kreiss_constant_check(sysm, cfg.alpha, samples=state.samples)
            _emit(entry, state)

        elif stage == "cesaro":
            estimate = cesaro_constants(sysm, cfg.alpha, cfg.t_grid)
            write_cesaro_csv(out_dir / "cesaro.csv", estimate.per_t)
            print(f"stage cesaro: C_primal={estimate.c_primal!r} "
                  f"C_adjoint={estimate.c_adjoint!r}")

        elif stage == "verify-identities":
            grid = _resolve_grid(cfg)
            r_values = _thin(grid.r_values(), _IDENTITY_MAX_R)
            vectors = default_trial_vectors(sysm.dim)
            worst = 0.0
            rows = []
            for r in r_values:
                for j, x in enumerate(vectors):
                    sub = bounds.plancherel_check(sysm, r, x, cfg.quad_tol)
                    worst = max(worst, sub.worst_margin)
                    rows.append({"r": r, "vector": j, "mismatch": sub.worst_margin,
                                 "left": sub.left, "right": sub.right})
            _emit(CheckEntry(
                check="plancherel-identity",
                inequality="integral ||R(-r+i.,A)x||^2 dbeta == "
                           "2*pi * integral_0^inf e^(-2 r s) ||T_s x||^2 ds",
                left=[row["left"] for row in rows],
                right=[row["right"] for row in rows],
                worst_margin=worst,
                slack=10.0 * cfg.quad_tol,
                passed=worst <= 10.0 * cfg.quad_tol,
                details={"rows": rows},
            ), state)
            _emit(bounds.resolvent_l2_check(sysm, cfg.alpha, None, r_values,
                                            trial_vectors=vectors, tol=cfg.quad_tol), state)
            _emit(bounds.resolvent_to_cesaro_check(sysm, cfg.alpha, cfg.t_grid,
                                                   trial_vectors=vectors,
                                                   tol=cfg.quad_tol), state)

        elif stage == "verify-theorem":
            if cfg.alpha <= 1.0:
                entry = bounds.sqrt_log_bound_check(sysm, cfg.alpha, cfg.t_grid)
            else:
                entry = bounds.power_bound_check(sysm, cfg.alpha, cfg.t_grid)
            _emit(entry, state)

        elif stage == "fit-growth":
            traj = trajectory(sysm, cfg.t_grid)
            write_trajectory_csv(out_dir / "trajectory.csv", traj)
            fit = bounds.growth_fit(traj, cfg.fit_model, omega=cfg.fit_omega)
            write_fit_json(out_dir / "fit.json", fit)
            _emit(CheckEntry(
                check="growth-fit",
                inequality="least-squares growth model recorded",
                left=fit.a,
                right=cfg.fit_model,
                worst_margin=0.0,
                slack=1.0,
                passed=math.isfinite(fit.a) and math.isfinite(fit.c),
                details=fit.to_dict(),
            ), state)

        elif stage == "wave-demo":
            params = WaveTruncationParams(nx=cfg.operator_spec["nx"],
                                          ny=cfg.operator_spec["ny"])
            demo = bounds.wave_demo(params, cfg.wave_t_max, cfg.wave)
            write_resolvent_csv(out_dir / "resolvent.csv", demo.resolvent_samples)
            write_trajectory_csv(out_dir / "trajectory.csv", demo.trajectory_forward)
            if demo.cesaro_forward is not None:
                write_cesaro_csv(out_dir / "cesaro.csv", demo.cesaro_forward.per_t)
            if "forward_power" in demo.fits:
                write_fit_json(out_dir / "fit.json", demo.fits["forward_power"])
            for entry in demo.report.entries:
                print(entry.summary_line())
            state.report.extend(demo.report)
            state.numerical_failure = state.numerical_failure or demo.numerical_failure

    state.report.write(out_dir / "report.json")
    return state


def _flops_text(value: float) -> str:
    return f"{value / 1e9:.2f} GFlop"


def describe(config_path) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    n = cfg.system.dim
    dense_cost = 26.0 * n**3 if n <= 400 else 3.3 * n**3
    print(f"plan for {cfg.label!r} ({config_path})")
    print(f"  operator: {cfg.system.label}  dim={n}  shift={cfg.system.shift:g}")
    print(f"  alpha: {cfg.alpha:g}")
    print(f"  stages in run order: {', '.join(cfg.stages)}")
    r_lo, r_hi, r_count, r_sp = cfg.r_axis
    r_desc = f"{r_count} {r_sp}[{r_lo:g}, {r_hi:g}]"
    if cfg.beta_axis is not None:
        b_lo, b_hi, b_count, b_sp = cfg.beta_axis
        b_desc = f"{b_count} {b_sp}[{b_lo:g}, {b_hi:g}]"
    else:
        b_count = 241
        b_desc = f"{b_count} linear[auto from ||A_eu||]"
    print(f"  grids: r: {r_desc}; beta: {b_desc}; t: {list(cfg.t_grid)}")
    for stage in cfg.stages:
        if stage in ("resolvent-sweep", "kreiss"):
            pts = r_count * b_count
            print(f"  {stage}: {pts} grid points, ~{_flops_text(pts * dense_cost)}")
        elif stage == "cesaro":
            nodes = sum(int(t / min(0.5, t / 4.0)) * 4 for t in cfg.t_grid)
            print(f"  {stage}: ~{nodes} propagator nodes, ~{_flops_text(nodes * 6 * n**3)}")
        elif stage == "verify-theorem":
            grid = (bounds.dyadic_cesaro_grid(max(cfg.t_grid)) if cfg.alpha <= 1
                    else sorted({2.0, *cfg.t_grid}))
            nodes = sum(int(t / min(0.5, t / 4.0)) * 4 for t in grid)
            cost = nodes * 6 * n**3 + len(cfg.t_grid) * dense_cost
            print(f"  {stage}: cesaro grid {grid}, ~{_flops_text(cost)}")
        elif stage == "verify-identities":
            pairs = min(_IDENTITY_MAX_R, cfg.r_axis[2]) * 3
            cost = pairs * 6 * 500 * n**3 / 3.0
            print(f"  {stage}: {pairs} (r, x) pairs, ~{_flops_text(cost)}")
        elif stage == "fit-growth":
            cost = len(cfg.t_grid) * (25 * n**3 + dense_cost)
            print(f"  {stage}: {len(cfg.t_grid)} trajectory points, ~{_flops_text(cost)}")
        elif stage == "wave-demo":
            wd = cfg.wave
            pts = 2 * wd.r_count * wd.beta_count
            traj = 2 * (int(round((cfg.wave_t_max - 2.0) / wd.trajectory_step)) + 1)
            cost = pts * 3.3 * n**3 + traj * (2 * n**3 + dense_cost) + 8 * 600 * n**3
            print(f"  {stage}: t_max={cfg.wave_t_max:g}, {pts} strip points, "
                  f"{traj} trajectory points, ~{_flops_text(cost)}")
    print("  outputs: none (describe is a dry run)")
    return 0


def run(config_path, out_override: str | None = None) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2

    out_dir = Path(out_override or os.environ.get(OUTPUT_ENV_VAR)
                   or cfg.output_dir or ".")
    print(f"running {cfg.label!r} -> {out_dir}")

    try:
        state = execute(cfg, out_dir)
    except (ResolventUndefinedError, NumericalFailureError) as exc:
        print(f"numerical failure: {exc}", file=_sys.stderr)
        return 3
    except ConfigurationError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2

    if state.numerical_failure:
        print("RESULT numerical failure (see report.json)")
        return 3
    failed = [e.check for e in state.report.entries if not e.passed]
    if failed:
        print(f"RESULT fail ({len(failed)} failing: {', '.join(failed)})")
        return 1
    print("RESULT pass")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="kreisslab",
        description="Verify resolvent-to-growth inequality chains for matrix semigroups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute the stages of a JSON experiment config")
    run_p.add_argument("config", help="path to the experiment config")
    run_p.add_argument("--out", default=None,
                       help=f"output directory (overrides ${OUTPUT_ENV_VAR} and the config)")
    desc_p = sub.add_parser("describe", help="print the execution plan without running it")
    desc_p.add_argument("config", help="path to the experiment config")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out)
    return describe(args.config)


if __name__ == "__main__":
    raise SystemExit(main())
