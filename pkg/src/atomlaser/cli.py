"""Command-line entry point: simulate, sweep, validate.

Configuration is a sectioned key=value file (INI syntax) or an equivalent
JSON document; every physical key carries its unit in its name.  All
frequencies are angular (s^-1).  Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import functools
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, continuum, dynamics, observables, sweep as sweep_mod
from .params import PhysicalParams, derive, validate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    """A malformed or inconsistent configuration; maps to exit code 2."""


# Configuration key -> PhysicalParams field.
_RUN_KEYS = {
    "mass_kg": "mass",
    "scattering_length_tt_m": "scattering_length_tt",
    "omega_z_per_s": "omega_z",
    "lambda_ratio": "lambda_ratio",
    "eta": "eta",
    "Lambda_per_s2": "Lambda",
    "N_total": "N_total",
    "alpha0_frac": "alpha0_frac",
    "beta0_frac": "beta0_frac",
    "phi0_rad": "phi0",
    "tau_s": "tau",
    "kappa_override_per_s": "kappa_override",
}
_FIELD_TO_KEY = {v: k for k, v in _RUN_KEYS.items()}
_DISCRETIZATION_KEYS = ("M", "omega_up_per_s")
_INTEGRATOR_KEYS = ("rtol", "atol", "sample_dt_s")
_OUTPUT_KEYS = ("directory", "formats", "per_point_dirs")
_SWEEP_FIXED_KEYS = ("observables", "max_points")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one invocation."""

    params: PhysicalParams
    M: int = 1500
    omega_up: float = 300.0
    rtol: float = 1e-9
    atol: float = 1e-12
    sample_dt: float = 1e-3
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json")
    per_point_dirs: bool = False
    sweep_axes: tuple[tuple[str, tuple[float, ...]], ...] = ()
    sweep_observables: tuple[str, ...] = sweep_mod.SUMMARY_NAMES
    sweep_max_points: int = 10_000


def _as_float(section: str, key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"[{section}] {key}: expected a number, got {value!r}") from None


def _as_int(section: str, key: str, value) -> int:
    try:
        return int(str(value))
    except (TypeError, ValueError):
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}") from None


def _as_bool(section: str, key: str, value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"[{section}] {key}: expected a boolean, got {value!r}")


def _parse_values(section: str, key: str, value) -> tuple[float, ...]:
    """Parse an axis value list: JSON arrays, comma lists, or linspace(a,b,n)."""
    if isinstance(value, (list, tuple)):
        return tuple(_as_float(section, key, v) for v in value)
    text = str(value).strip()
    if text.startswith("[") and text.endswith("]"):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"[{section}] {key}: invalid JSON array: {exc}") from None
        if not isinstance(items, list):
            raise ConfigError(f"[{section}] {key}: expected a JSON array")
        return tuple(_as_float(section, key, v) for v in items)
    if text.startswith("linspace(") and text.endswith(")"):
        inner = text[len("linspace(") : -1]
        parts = [p.strip() for p in inner.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"[{section}] {key}: linspace takes (start, stop, count)")
        start = _as_float(section, key, parts[0])
        stop = _as_float(section, key, parts[1])
        count = _as_int(section, key, parts[2])
        if count < 1:
            raise ConfigError(f"[{section}] {key}: linspace count must be >= 1")
        return tuple(float(v) for v in np.linspace(start, stop, count))
    values = tuple(_as_float(section, key, p.strip()) for p in text.split(",") if p.strip() != "")
    if not values:
        raise ConfigError(f"[{section}] {key}: no values given")
    return values


def _read_raw_config(path: str | None) -> dict[str, dict[str, object]]:
    """Load INI or JSON into {section: {key: raw value}} without interpretation."""
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or not all(isinstance(v, dict) for v in doc.values()):
            raise ConfigError(f"{path}: top level must be sections of key=value maps")
        return {str(s): dict(kv) for s, kv in doc.items()}
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (Lambda_per_s2 vs lambda_ratio)
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return {section: dict(parser.items(section)) for section in parser.sections()}


def _apply_overrides(raw: dict[str, dict[str, object]], overrides: list[str]) -> None:
    """Apply --override entries (key=value or section.key=value) after file parse."""
    sections_by_key = {}
    for section, keys in (
        ("run", _RUN_KEYS),
        ("discretization", _DISCRETIZATION_KEYS),
        ("integrator", _INTEGRATOR_KEYS),
        ("outputs", _OUTPUT_KEYS),
        ("sweep", _SWEEP_FIXED_KEYS),
    ):
        for key in keys:
            sections_by_key[key] = section
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--override needs key=value, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key.startswith("axis.") or key.startswith("axis_"):
            section = "sweep"
        elif "." in key:
            section, _, key = key.partition(".")
        else:
            section = sections_by_key.get(key)
            if section is None:
                raise ConfigError(f"--override: unknown key {key!r}")
        raw.setdefault(section, {})[key] = value.strip()


def build_config(raw: dict[str, dict[str, object]]) -> RunConfig:
    """Interpret the raw section map, rejecting unknown sections and keys."""
    known_sections = {"run", "discretization", "integrator", "outputs", "sweep"}
    for section in raw:
        if section not in known_sections:
            raise ConfigError(f"unknown config section [{section}]")

    run_raw = dict(raw.get("run", {}))
    kwargs: dict[str, object] = {}
    for key, value in run_raw.items():
        if key not in _RUN_KEYS:
            raise ConfigError(f"[run] unknown key {key!r}")
        field = _RUN_KEYS[key]
        if field == "kappa_override":
            if value is None or str(value).strip().lower() in ("", "none", "null"):
                kwargs[field] = None
            else:
                kwargs[field] = _as_float("run", key, value)
        else:
            kwargs[field] = _as_float("run", key, value)
    try:
        params = PhysicalParams(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[run] {exc}") from None

    disc_raw = dict(raw.get("discretization", {}))
    for key in disc_raw:
        if key not in _DISCRETIZATION_KEYS:
            raise ConfigError(f"[discretization] unknown key {key!r}")
    M = _as_int("discretization", "M", disc_raw.get("M", 1500))
    omega_up = _as_float("discretization", "omega_up_per_s", disc_raw.get("omega_up_per_s", 300.0))
    if M < 1:
        raise ConfigError("[discretization] M must be >= 1")
    if omega_up <= 0:
        raise ConfigError("[discretization] omega_up_per_s must be positive")

    integ_raw = dict(raw.get("integrator", {}))
    for key in integ_raw:
        if key not in _INTEGRATOR_KEYS:
            raise ConfigError(f"[integrator] unknown key {key!r}")
    rtol = _as_float("integrator", "rtol", integ_raw.get("rtol", 1e-9))
    atol = _as_float("integrator", "atol", integ_raw.get("atol", 1e-12))
    sample_dt = _as_float("integrator", "sample_dt_s", integ_raw.get("sample_dt_s", 1e-3))
    if sample_dt <= 0:
        raise ConfigError("[integrator] sample_dt_s must be positive")

    out_raw = dict(raw.get("outputs", {}))
    for key in out_raw:
        if key not in _OUTPUT_KEYS:
            raise ConfigError(f"[outputs] unknown key {key!r}")
    out_dir = str(out_raw.get("directory", "out"))
    formats_value = out_raw.get("formats", ("csv", "json"))
    if isinstance(formats_value, str):
        formats = tuple(f.strip() for f in formats_value.split(",") if f.strip())
    else:
        formats = tuple(str(f) for f in formats_value)
    for fmt in formats:
        if fmt not in ("csv", "json"):
            raise ConfigError(f"[outputs] unsupported format {fmt!r}")
    per_point_dirs = _as_bool("outputs", "per_point_dirs", out_raw.get("per_point_dirs", False))

    sweep_raw = dict(raw.get("sweep", {}))
    axes: list[tuple[str, tuple[float, ...]]] = []
    sweep_observables: tuple[str, ...] = sweep_mod.SUMMARY_NAMES
    sweep_max_points = 10_000
    for key, value in sweep_raw.items():
        if key == "observables":
            if isinstance(value, (list, tuple)):
                sweep_observables = tuple(str(v) for v in value)
            else:
                sweep_observables = tuple(o.strip() for o in str(value).split(",") if o.strip())
        elif key == "max_points":
            sweep_max_points = _as_int("sweep", key, value)
        elif key.startswith("axis.") or key.startswith("axis_"):
            axis_key = key[5:]
            if axis_key not in _RUN_KEYS:
                raise ConfigError(f"[sweep] unknown axis parameter {axis_key!r}")
            axes.append((_RUN_KEYS[axis_key], _parse_values("sweep", key, value)))
        else:
            raise ConfigError(f"[sweep] unknown key {key!r}")
    unknown_obs = set(sweep_observables) - set(sweep_mod.SUMMARY_NAMES)
    if unknown_obs:
        raise ConfigError(f"[sweep] unknown observables: {sorted(unknown_obs)}")

    return RunConfig(
        params=params,
        M=M,
        omega_up=omega_up,
        rtol=rtol,
        atol=atol,
        sample_dt=sample_dt,
        out_dir=out_dir,
        formats=formats,
        per_point_dirs=per_point_dirs,
        sweep_axes=tuple(axes),
        sweep_observables=sweep_observables,
        sweep_max_points=sweep_max_points,
    )


def load_config(path: str | None, overrides: list[str] | None = None) -> RunConfig:
    raw = _read_raw_config(path)
    if overrides:
        _apply_overrides(raw, overrides)
    return build_config(raw)


def _fmt(x: float) -> str:
    """Scientific notation with 13 significant digits (>= the 12 required)."""
    return f"{x:.12e}"


def resolved_config_dict(config: RunConfig) -> dict:
    """The full configuration with defaults applied, using file-format keys."""
    run = {}
    for field in dataclasses.fields(PhysicalParams):
        value = getattr(config.params, field.name)
        run[_FIELD_TO_KEY[field.name]] = value
    return {
        "run": run,
        "discretization": {"M": config.M, "omega_up_per_s": config.omega_up},
        "integrator": {
            "rtol": config.rtol,
            "atol": config.atol,
            "sample_dt_s": config.sample_dt,
        },
        "outputs": {
            "directory": config.out_dir,
            "formats": list(config.formats),
            "per_point_dirs": config.per_point_dirs,
        },
    }


def _write_trajectory_csv(path: Path, traj: dynamics.Trajectory, n_total: float) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t_s", "N_A", "N_B", "N_C", "frac_A", "frac_B", "frac_C", "phi_rad", "p_tilde", "H_c"]
        )
        for i in range(len(traj.ts)):
            writer.writerow(
                [
                    _fmt(traj.ts[i]),
                    _fmt(traj.N_A[i]),
                    _fmt(traj.N_B[i]),
                    _fmt(traj.N_C[i]),
                    _fmt(traj.N_A[i] / n_total),
                    _fmt(traj.N_B[i] / n_total),
                    _fmt(traj.N_C[i] / n_total),
                    _fmt(traj.relative_phase[i]),
                    _fmt(traj.p_tilde[i]),
                    _fmt(traj.H_c[i]),
                ]
            )


def _write_spectrum_csv(path: Path, analysis: observables.SpectrumAnalysis) -> None:
    peak_indices = {p.index for p in analysis.peaks}
    dip_indices = {d.index for d in analysis.dips}
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_per_s", "density_atoms_s", "is_peak", "is_dip"])
        for j in range(len(analysis.omegas)):
            writer.writerow(
                [
                    _fmt(analysis.omegas[j]),
                    _fmt(analysis.density[j]),
                    1 if j in peak_indices else 0,
                    1 if j in dip_indices else 0,
                ]
            )


def _json_safe(x: float) -> float | None:
    return None if (isinstance(x, float) and not math.isfinite(x)) else x


def _write_meta(
    path: Path,
    config: RunConfig,
    derived,
    cont: continuum.DiscretizedContinuum,
    traj: dynamics.Trajectory,
    wall_time: float,
) -> None:
    meta = {
        "artifact_version": __version__,
        "config": resolved_config_dict(config),
        "derived": {
            "l_z_m": derived.l_z,
            "J_per_s": derived.J,
            "kappa_per_s": derived.kappa,
            "S_per_s": cont.shift_S,
            "epsilon_per_s": cont.epsilon,
            "N_max": derived.N_max,
            "t_collapse_s": _json_safe(derived.t_collapse),
            "mu_A0_J": derived.mu_A0,
            "mu_B0_J": derived.mu_B0,
        },
        "norm_drift": traj.norm_drift,
        "n_steps": traj.n_steps,
        "wall_time_s": wall_time,
    }
    path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def _print_warnings(report) -> None:
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)


def cmd_simulate(config: RunConfig, out_dir: Path) -> int:
    wall_start = time.perf_counter()
    derived = derive(config.params)
    _print_warnings(validate(config.params, derived))
    cont = continuum.discretize(config.params.Lambda, config.params.omega_z, config.M, config.omega_up)
    try:
        traj = dynamics.integrate(
            config.params,
            derived,
            cont,
            sample_dt=config.sample_dt,
            rtol=config.rtol,
            atol=config.atol,
        )
    except dynamics.IntegrationError as exc:
        print(f"error: integration failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    analysis = observables.spectrum(traj.final_state, cont)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in config.formats:
        _write_trajectory_csv(out_dir / "trajectory.csv", traj, config.params.N_total)
        _write_spectrum_csv(out_dir / "spectrum.csv", analysis)
        written += ["trajectory.csv", "spectrum.csv"]
    if "json" in config.formats:
        wall = time.perf_counter() - wall_start
        _write_meta(out_dir / "meta.json", config, derived, cont, traj, wall)
        written.append("meta.json")
    print(f"wrote {', '.join(written)} to {out_dir}")
    return EXIT_OK


def _point_writer(out_root: str, index: int, run_params, traj, analysis) -> None:
    point_dir = Path(out_root) / "points" / f"point_{index:04d}"
    point_dir.mkdir(parents=True, exist_ok=True)
    _write_trajectory_csv(point_dir / "trajectory.csv", traj, run_params.N_total)
    _write_spectrum_csv(point_dir / "spectrum.csv", analysis)


def cmd_sweep(config: RunConfig, out_dir: Path, workers: int | None) -> int:
    if not config.sweep_axes:
        print("error: [sweep] section defines no axes", file=sys.stderr)
        return EXIT_CONFIG
    callback = None
    if config.per_point_dirs:
        out_dir.mkdir(parents=True, exist_ok=True)
        callback = functools.partial(_point_writer, str(out_dir))
    try:
        spec = sweep_mod.SweepSpec(
            base=config.params,
            axes=config.sweep_axes,
            observables=config.sweep_observables,
            M=config.M,
            omega_up=config.omega_up,
            rtol=config.rtol,
            atol=config.atol,
            sample_dt=config.sample_dt,
            max_points=config.sweep_max_points,
            per_point_callback=callback,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = sweep_mod.run_sweep(spec, worker_count=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    axis_keys = [_FIELD_TO_KEY[name] for name in result.axis_names]
    with (out_dir / "sweep.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(axis_keys + list(result.observables) + ["status"])
        for row in result.rows:
            status = row.status
            if status == "ok" and row.notes:
                detail = ";".join(f"{k}={v}" for k, v in sorted(row.notes.items()))
                status = f"partial: {detail}"
            writer.writerow(
                [_fmt(c) for c in row.coordinates]
                + ["" if row.values[name] is None else _fmt(row.values[name]) for name in result.observables]
                + [status]
            )
    print(f"wrote {out_dir}/sweep.csv ({len(result.rows)} rows)")
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    derived = derive(config.params)
    report = validate(config.params, derived)
    p = config.params
    print("resolved parameters")
    print(f"  omega_z      = {p.omega_z:g} s^-1")
    print(f"  lambda_ratio = {p.lambda_ratio:g}")
    print(f"  eta          = {p.eta:g}")
    print(f"  Lambda       = {p.Lambda:g} s^-2")
    print(f"  N_total      = {p.N_total:g}")
    print(f"  tau          = {p.tau:g} s")
    print("derived parameters")
    print(f"  l_z        = {derived.l_z:.6e} m")
    print(f"  J          = {derived.J:.6f} s^-1")
    print(f"  kappa      = {derived.kappa:.6f} s^-1")
    print(f"  N_max      = {derived.N_max:.6g}")
    print(f"  t_collapse = {derived.t_collapse:.6g} s")
    if p.kappa_override == 0.0:
        print("interaction-free mode (kappa forced to 0)")
    for check in report.checks:
        marker = "ok  " if check.ok else "warn"
        print(f"[{marker}] {check.name}: {check.message}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="atomlaser",
        description="Simulate outcoupling of two tunnel-coupled condensates into a 1D continuum.",
    )
    parser.add_argument("--config", help="INI or JSON configuration file")
    parser.add_argument("--out", help="output directory (overrides [outputs] directory)")
    parser.add_argument("--workers", type=int, default=None, help="worker processes for sweeps")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key after file parsing (repeatable); "
        "use section.key or a bare unique key",
    )
    parser.add_argument("command", choices=["simulate", "sweep", "validate"])
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, args.override)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out) if args.out else Path(config.out_dir)
    try:
        if args.command == "simulate":
            return cmd_simulate(config, out_dir)
        if args.command == "sweep":
            return cmd_sweep(config, out_dir, args.workers)
        return cmd_validate(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except dynamics.IntegrationError as exc:
        print(f"error: integration failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
