"""Shared fixtures: the handful of expensive reference trajectories.

Long integrations (10 s of physical time against 1500 continuum modes) are
computed once per session and shared between the unit tests and the
acceptance tests.  Everything here uses the public package API only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pytest

import atomlaser as al

TWO_PI = 2.0 * math.pi

# Sixteen evenly spaced initial phases covering [0, 2*pi], endpoints included.
PHI_GRID_16 = tuple(float(v) for v in np.linspace(0.0, TWO_PI, 16))


def bec(**overrides) -> al.PhysicalParams:
    """The default sodium two-well configuration with keyword tweaks.

    ``alpha`` is accepted as shorthand that keeps the two trapped fractions
    summing to one.
    """
    if "alpha" in overrides:
        alpha = overrides.pop("alpha")
        overrides["alpha0_frac"] = alpha
        overrides["beta0_frac"] = 1.0 - alpha
    return al.PhysicalParams(**overrides)


@dataclass(frozen=True)
class RunBundle:
    """One finished simulation with everything tests may want to poke at."""

    params: al.PhysicalParams
    derived: al.DerivedParams
    cont: al.DiscretizedContinuum
    traj: al.Trajectory
    analysis: al.SpectrumAnalysis


def run_full(params: al.PhysicalParams, *, M: int = 1500, omega_up: float = 300.0,
             **integrate_kwargs) -> RunBundle:
    derived = al.derive(params)
    cont = al.discretize(params.Lambda, params.omega_z, M, omega_up)
    traj = al.integrate(params, derived, cont, **integrate_kwargs)
    analysis = al.spectrum(traj.final_state, cont)
    return RunBundle(params, derived, cont, traj, analysis)


# --------------------------------------------------------------------------
# Weak outcoupling (Lambda=1e2 s^-2): Josephson doublet configuration.
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def weak_run() -> RunBundle:
    """Lambda=100, eta=1.7, kappa=0, alpha=0.7, phi0=0, tau=10 s."""
    return run_full(bec(Lambda=100.0, eta=1.7, kappa_override=0.0))


@pytest.fixture(scope="session")
def weak_phase_sweep() -> al.SweepResult:
    """16-point phi0 sweep of the weak configuration (amplitude + peak ratio)."""
    spec = al.SweepSpec(
        base=bec(Lambda=100.0, eta=1.7, kappa_override=0.0),
        axes=(("phi0", PHI_GRID_16),),
        observables=("oscillation_amplitude_second_peak", "peak_ratio"),
    )
    return al.run_sweep(spec)


# --------------------------------------------------------------------------
# Strong outcoupling (Lambda=4e3 s^-2): bound-state configuration.
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def strong_run() -> RunBundle:
    """Lambda=4e3, eta=1.5, kappa=0, alpha=0.7, phi0=0, tau=10 s."""
    return run_full(bec(Lambda=4e3, eta=1.5, kappa_override=0.0))


@pytest.fixture(scope="session")
def strong_run_m3000() -> RunBundle:
    """Same configuration as strong_run at twice the continuum resolution."""
    return run_full(bec(Lambda=4e3, eta=1.5, kappa_override=0.0), M=3000)


@pytest.fixture(scope="session")
def strong_phase_sweep() -> al.SweepResult:
    """16-point phi0 sweep of the strong configuration (steady population)."""
    spec = al.SweepSpec(
        base=bec(Lambda=4e3, eta=1.5, kappa_override=0.0),
        axes=(("phi0", PHI_GRID_16),),
        observables=("steady_state_NA",),
    )
    return al.run_sweep(spec)


@pytest.fixture(scope="session")
def atom_number_sweep() -> al.SweepResult:
    """N in {50..300} at Lambda=4e3, eta=1.5 with the physical kappa."""
    spec = al.SweepSpec(
        base=bec(Lambda=4e3, eta=1.5),
        axes=(("N_total", (50.0, 100.0, 150.0, 200.0, 250.0, 300.0)),),
        observables=("steady_state_NA",),
    )
    return al.run_sweep(spec)


# --------------------------------------------------------------------------
# Intermediate outcoupling (Lambda=2e3 s^-2): dark-line configuration.
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def dark_run_phi0() -> RunBundle:
    return run_full(bec(Lambda=2e3, eta=1.7, kappa_override=0.0, phi0=0.0))


@pytest.fixture(scope="session")
def dark_run_phi90() -> RunBundle:
    return run_full(bec(Lambda=2e3, eta=1.7, kappa_override=0.0, phi0=math.pi / 2))


# --------------------------------------------------------------------------
# Interacting runs.
# --------------------------------------------------------------------------


@pytest.fixture(scope="session")
def selftrap_run() -> RunBundle:
    """Lambda=100, eta=1.7, N=200 with physical kappa: self-trapped start."""
    return run_full(bec(Lambda=100.0, eta=1.7, N_total=200.0))


@pytest.fixture(scope="session")
def chirp_run() -> RunBundle:
    """Lambda=100, eta=1.5, N=100 with physical kappa: chirped spectrum."""
    return run_full(bec(Lambda=100.0, eta=1.5, N_total=100.0))


@pytest.fixture(scope="session")
def chirp_reference_run() -> RunBundle:
    """Interaction-free counterpart of chirp_run."""
    return run_full(bec(Lambda=100.0, eta=1.5, N_total=100.0, kappa_override=0.0))


# --------------------------------------------------------------------------
# Acceptance reporting: exactly one pass/fail line per criterion.
# --------------------------------------------------------------------------

_CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    _CRITERION_LINES[number] = f"criterion {number:2d} {verdict}  {title}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])


# --------------------------------------------------------------------------
# Small numeric helpers used by several test modules.
# --------------------------------------------------------------------------


def linear_fit_residual(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares line through (x, y); returns (coeffs, max |residual|)."""
    coeffs = np.polyfit(x, y, 1)
    residuals = y - np.polyval(coeffs, x)
    return coeffs, float(np.max(np.abs(residuals)))


def cosine_fit(phi: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Fit y = x + y_amp*cos(phi); returns (x, y_amp, max |residual|)."""
    design = np.column_stack([np.ones_like(phi), np.cos(phi)])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ sol
    return float(sol[0]), float(sol[1]), float(np.max(np.abs(resid)))


def proportional_fit_r2(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Fit y = c*x through the origin; returns (c, coefficient of determination)."""
    c = float(np.dot(x, y) / np.dot(x, x))
    ss_res = float(np.sum((y - c * x) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    return c, 1.0 - ss_res / ss_tot
