"""Parameter-grid execution with per-point parallelism.

A sweep expands a Cartesian grid over fields of :class:`PhysicalParams`,
runs one full simulation per grid point (each trajectory owns its state
exclusively), and reduces every run to named summary scalars.  Rows are keyed
by grid index, so results are identical regardless of worker count or
scheduling order.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import find_peaks

from . import continuum, dynamics, observables, params as params_mod

SUMMARY_NAMES = (
    "oscillation_amplitude_second_peak",
    "peak_ratio",
    "steady_state_NA",
    "dip_depth",
    "regime_transition_times",
)

#: Prominence threshold (as a fraction of the total atom number) used when
#: locating maxima of N_A(t) for the second-peak amplitude protocol.
_AMPLITUDE_PEAK_PROMINENCE_FRAC = 0.01


@dataclass(frozen=True)
class SweepSpec:
    """A Cartesian parameter grid plus per-run numerical settings.

    axes maps PhysicalParams field names to value tuples, in grid order
    (the last axis varies fastest).  observables selects entries of
    ``SUMMARY_NAMES``.
    """

    base: params_mod.PhysicalParams
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    observables: tuple[str, ...] = SUMMARY_NAMES
    M: int = 1500
    omega_up: float = 300.0
    rtol: float = 1e-9
    atol: float = 1e-12
    sample_dt: float = 1e-3
    max_points: int = 10_000
    per_point_callback: Callable | None = None

    def __post_init__(self) -> None:
        if not self.axes:
            raise ValueError("sweep needs at least one axis")
        known = {f.name for f in dataclasses.fields(params_mod.PhysicalParams)}
        for name, values in self.axes:
            if name not in known:
                raise ValueError(f"unknown sweep axis {name!r}")
            if len(values) == 0:
                raise ValueError(f"axis {name!r} has no values")
        unknown = set(self.observables) - set(SUMMARY_NAMES)
        if unknown:
            raise ValueError(f"unknown summary observables: {sorted(unknown)}")
        size = math.prod(len(values) for _, values in self.axes)
        if size > self.max_points:
            raise ValueError(f"grid has {size} points, exceeding the limit of {self.max_points}")

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    def grid(self) -> list[tuple[float, ...]]:
        return list(itertools.product(*(values for _, values in self.axes)))


@dataclass(frozen=True)
class SweepRow:
    index: int
    coordinates: tuple[float, ...]
    values: dict[str, float | None]
    notes: dict[str, str]
    norm_drift: float
    wall_time: float
    status: str


@dataclass(frozen=True)
class SweepResult:
    axis_names: tuple[str, ...]
    observables: tuple[str, ...]
    rows: tuple[SweepRow, ...]


def transition_times(traj: dynamics.Trajectory) -> np.ndarray:
    """Times where N_A(t) and N_B(t) cross (sign changes of the imbalance)."""
    p = traj.p_tilde
    ts = traj.ts
    sign = np.sign(p)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if flips.size == 0:
        return np.zeros(0)
    # Linear interpolation inside each flipped interval.
    frac = p[flips] / (p[flips] - p[flips + 1])
    return ts[flips] + frac * (ts[flips + 1] - ts[flips])


def _second_peak_amplitude(traj: dynamics.Trajectory) -> tuple[float | None, str | None]:
    n_total = traj.N_A[0] + traj.N_B[0] + traj.N_C[0]
    # "Flat" up to the integrator's norm-drift budget counts as zero amplitude.
    if float(np.ptp(traj.N_A)) <= 1e-6 * max(n_total, 1.0):
        return 0.0, None
    maxima, _ = find_peaks(traj.N_A, prominence=_AMPLITUDE_PEAK_PROMINENCE_FRAC * n_total)
    if maxima.size < 2:
        return None, "fewer than two maxima in N_A(t)"
    second = maxima[1]
    trough = float(np.min(traj.N_A[maxima[0] : second + 1]))
    return 0.5 * (float(traj.N_A[second]) - trough), None


def extract_summary(
    traj: dynamics.Trajectory,
    spectrum_analysis: observables.SpectrumAnalysis,
    name: str,
) -> tuple[float | None, str | None]:
    """Reduce a finished run to one named scalar; (None, reason) when absent.

    oscillation_amplitude_second_peak: half peak-to-trough swing of N_A(t)
        measured at its second local maximum.
    peak_ratio: higher-frequency over lower-frequency height of the two
        tallest spectral peaks.
    steady_state_NA: population fraction of mode A at the end of the pulse.
    dip_depth: depth of the most prominent spectral dip.
    regime_transition_times: first time at which N_A(t) = N_B(t).
    """
    if name == "oscillation_amplitude_second_peak":
        return _second_peak_amplitude(traj)
    if name == "peak_ratio":
        ratio = spectrum_analysis.peak_ratio
        if math.isnan(ratio):
            return None, "fewer than two spectral peaks"
        return ratio, None
    if name == "steady_state_NA":
        n_total = traj.N_A[0] + traj.N_B[0] + traj.N_C[0]
        return float(traj.N_A[-1]) / n_total, None
    if name == "dip_depth":
        if not spectrum_analysis.dips:
            return None, "no dip detected"
        return max(d.depth for d in spectrum_analysis.dips), None
    if name == "regime_transition_times":
        times = transition_times(traj)
        if times.size == 0:
            return None, "no N_A=N_B crossing"
        return float(times[0]), None
    raise ValueError(f"unknown summary observable {name!r}")


def _run_point(spec: SweepSpec, index: int, coordinates: tuple[float, ...]) -> SweepRow:
    overrides = dict(zip(spec.axis_names, coordinates))
    try:
        run_params = dataclasses.replace(spec.base, **overrides)
        derived = params_mod.derive(run_params)
        params_mod.validate(run_params, derived)  # warnings never block
        cont = continuum.discretize(run_params.Lambda, run_params.omega_z, spec.M, spec.omega_up)
        traj = dynamics.integrate(
            run_params,
            derived,
            cont,
            sample_dt=spec.sample_dt,
            rtol=spec.rtol,
            atol=spec.atol,
        )
        spectrum_analysis = observables.spectrum(traj.final_state, cont)
    except Exception as exc:  # recorded, never aborts the sweep
        return SweepRow(
            index=index,
            coordinates=coordinates,
            values={name: None for name in spec.observables},
            notes={},
            norm_drift=math.nan,
            wall_time=math.nan,
            status=f"failed: {exc}",
        )
    values: dict[str, float | None] = {}
    notes: dict[str, str] = {}
    for name in spec.observables:
        value, note = extract_summary(traj, spectrum_analysis, name)
        values[name] = value
        if note is not None:
            notes[name] = note
    if spec.per_point_callback is not None:
        spec.per_point_callback(index, run_params, traj, spectrum_analysis)
    return SweepRow(
        index=index,
        coordinates=coordinates,
        values=values,
        notes=notes,
        norm_drift=traj.norm_drift,
        wall_time=traj.wall_time,
        status="ok",
    )


def run_sweep(spec: SweepSpec, worker_count: int | None = None) -> SweepResult:
    """Run every grid point and aggregate rows in deterministic grid order.

    With ``worker_count`` of None or <= 1 the points run sequentially in the
    current process; otherwise a process pool computes them concurrently.
    Row contents are bitwise independent of the worker count.
    """
    points = spec.grid()
    if worker_count is not None and worker_count > 1:
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            rows = list(pool.map(_run_point, itertools.repeat(spec), range(len(points)), points))
    else:
        rows = [_run_point(spec, i, coords) for i, coords in enumerate(points)]
    rows.sort(key=lambda r: r.index)
    return SweepResult(
        axis_names=spec.axis_names,
        observables=spec.observables,
        rows=tuple(rows),
    )
